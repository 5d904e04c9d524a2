#pragma once

#include "prent/mock_backends.hpp"
#include "prent/pipeline.hpp"
#include "prent/random.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace prent::testing {

/// One randomly generated pipeline input with the fixtures that answer it.
struct random_case {
  std::string event;
  prompt_template templ;
  std::shared_ptr<mock_fixtures> fixtures;
  std::size_t candidates = 0; ///< length of the fixture fill list
};

random_case make_random_case(random::engine& rng, std::size_t index);

struct property_tally {
  std::size_t cases = 0;
  std::map<std::string, std::size_t> violations; ///< property -> count, every property listed

  std::size_t total_violations() const;
};

/// Subset, threshold monotonicity, K monotonicity, threshold-0 identity and
/// determinism, each checked on `cases` random mock-backed inputs.
property_tally check_pipeline_properties(std::size_t cases, std::uint64_t seed);

} // namespace prent::testing
