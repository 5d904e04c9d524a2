#pragma once

#include <cstddef>

namespace prent::testing {

struct rule_oracle_tally {
  std::size_t rules = 0;
  std::size_t evaluations = 0;
  std::size_t mismatches = 0;
};

/// Every DNF rule with at most `max_literals` literals over a four-token
/// universe, checked against a truth table on all 16 entailed subsets.
/// Literals within a clause are distinct.
rule_oracle_tally check_rule_oracle(std::size_t max_literals = 4);

} // namespace prent::testing
