#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

// Portable seeded sampling. std::shuffle and the std distributions are
// implementation-defined, so splits and samples would differ between standard
// libraries; these helpers only rely on the fully specified mt19937_64 stream.
namespace prent::random {

using engine = std::mt19937_64;

/// uniform integer in [0, bound) by rejection sampling; bound > 0
inline std::uint64_t uniform_below(engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// uniform real in [0, 1) with 53 bits of resolution
inline double uniform_unit(engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::vector<T>& v, engine& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// k distinct indices from [0, n), in draw order
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           engine& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  if (k > n) k = n;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

} // namespace prent::random
