#pragma once

#include "prent/corpus.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace prent::testing {

struct split_check {
  double worst_train_deviation = 0.0; ///< max over classes of |count - expected| in train
  double worst_test_deviation = 0.0;
  bool sizes_exact = true;
  bool disjoint = true;
  bool reproducible = true;
  bool seed_sensitive = true;
  bool order_kept = true;

  bool within_one() const { return worst_train_deviation <= 1.0 && worst_test_deviation <= 1.0; }
};

/// Compares a stratified split against the exact real-valued class shares
/// n * count / total of each side.
split_check check_split(std::span<const event_record> records, std::size_t n_train, std::size_t n_test,
                        std::uint64_t seed);

/// records with labels drawn from the given class sizes, ids "s0001"...
std::vector<event_record> labeled_records(const std::vector<std::pair<std::string, std::size_t>>& classes,
                                          std::uint64_t shuffle_seed);

} // namespace prent::testing
