#include "split_properties.hpp"

#include "prent/random.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace prent::testing {

namespace {

double deviation(const std::vector<event_record>& side, const std::map<std::string, std::size_t>& counts,
                      std::size_t total) {
  std::map<std::string, std::size_t> got;
  for (const auto& r : side) ++got[*r.label];
  double worst = 0.0;
  for (const auto& [label, c] : counts) {
    const double expected = static_cast<double>(side.size()) * static_cast<double>(c) / static_cast<double>(total);
    worst = std::max(worst, std::abs(static_cast<double>(got[label]) - expected));
  }
  return worst;
}

bool is_subsequence(const std::vector<event_record>& side, std::span<const event_record> records) {
  std::size_t j = 0;
  for (const auto& r : records)
    if (j < side.size() && side[j].id == r.id) ++j;
  return j == side.size();
}

} // namespace

split_check check_split(std::span<const event_record> records, std::size_t n_train, std::size_t n_test,
                        std::uint64_t seed) {
  split_check out;
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[*r.label];

  const auto a = stratified_split(records, {n_train, n_test, seed});
  const auto b = stratified_split(records, {n_train, n_test, seed});
  const auto c = stratified_split(records, {n_train, n_test, seed + 1});

  out.sizes_exact = a.train.size() == n_train && a.test.size() == n_test;
  std::set<std::string> ids;
  for (const auto& r : a.train) ids.insert(r.id);
  for (const auto& r : a.test)
    if (!ids.insert(r.id).second) out.disjoint = false;
  out.reproducible = a.train == b.train && a.test == b.test;
  // with enough slack a different seed picks different records
  if (n_train + n_test < records.size()) out.seed_sensitive = !(a.train == c.train && a.test == c.test);
  out.order_kept = is_subsequence(a.train, records) && is_subsequence(a.test, records);
  out.worst_train_deviation = deviation(a.train, counts, records.size());
  out.worst_test_deviation = deviation(a.test, counts, records.size());
  return out;
}

std::vector<event_record> labeled_records(const std::vector<std::pair<std::string, std::size_t>>& classes,
                                          std::uint64_t shuffle_seed) {
  std::vector<std::string> labels;
  for (const auto& [label, n] : classes)
    for (std::size_t i = 0; i < n; ++i) labels.push_back(label);
  random::engine rng(shuffle_seed);
  random::shuffle(labels, rng);
  std::vector<event_record> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "s%04zu", i + 1);
    event_record r;
    r.id = id;
    r.description = "Event " + std::to_string(i + 1) + " of type " + labels[i] + ".";
    r.label = labels[i];
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace prent::testing
