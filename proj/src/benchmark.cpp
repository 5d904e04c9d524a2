#include "prent/benchmark.hpp"

#include "prent/error.hpp"
#include "prent/random.hpp"
#include "prent/text.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

namespace prent {

std::string to_string(feature_mode m) {
  switch (m) {
  case feature_mode::bow: return "bow";
  case feature_mode::pr: return "pr";
  case feature_mode::prent: return "prent";
  case feature_mode::random: return "random";
  }
  return "?";
}

feature_mode parse_feature_mode(std::string_view s) {
  if (s == "bow") return feature_mode::bow;
  if (s == "pr") return feature_mode::pr;
  if (s == "prent") return feature_mode::prent;
  if (s == "random") return feature_mode::random;
  throw std::invalid_argument("unknown feature mode '" + std::string(s) + "'");
}

std::vector<std::string> description_tokens(std::string_view s) {
  auto word = [](unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; };
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!word(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && word(static_cast<unsigned char>(s[j]))) ++j;
    if (j - i >= 2) out.push_back(text::to_lower_ascii(s.substr(i, j - i)));
    i = j;
  }
  return out;
}

const scored_set& pipeline_outputs::at(const std::string& event_id) const {
  auto it = by_event.find(event_id);
  if (it == by_event.end()) throw missing_pipeline_output("no pipeline output for event '" + event_id + "'");
  return it->second;
}

nlohmann::json pipeline_outputs::to_json() const {
  nlohmann::json events = nlohmann::json::object();
  for (const auto& [id, s] : by_event) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : s.scored) rows.push_back({c.token, c.fill_probability, c.entail_probability});
    events[id] = rows;
  }
  return {{"template_id", template_id}, {"top_k", top_k}, {"events", events}};
}

pipeline_outputs pipeline_outputs::from_json(const nlohmann::json& j) {
  pipeline_outputs out;
  out.template_id = j.at("template_id").get<std::string>();
  out.top_k = j.at("top_k").get<std::size_t>();
  for (const auto& [id, rows] : j.at("events").items()) {
    scored_set s{out.template_id, {}};
    for (const auto& r : rows) s.scored.push_back({r[0].get<std::string>(), r[1].get<double>(), r[2].get<double>()});
    out.by_event.emplace(id, std::move(s));
  }
  return out;
}

pipeline_outputs run_pipeline(const backends& models, std::span<const event_record> records,
                              const prompt_template& t, const pipeline_config& config, unsigned workers) {
  std::vector<event_description> events;
  events.reserve(records.size());
  for (const auto& r : records) events.emplace_back(r.description);
  const std::vector<prompt_template> templates{t};
  const auto results = pr_ent_many(models, events, templates, config, workers);
  pipeline_outputs out{t.id, config.top_k, {}};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& o = results[i].at(t.id);
    if (o.error) throw error("event '" + records[i].id + "': " + *o.error);
    out.by_event.emplace(records[i].id, *o.scored);
  }
  return out;
}

std::vector<token_bag> featurize(std::span<const event_record> records, const feature_options& opts,
                                 const pipeline_outputs* outputs) {
  if (opts.mode != feature_mode::bow) {
    if (outputs == nullptr) throw missing_pipeline_output("mode " + to_string(opts.mode) + " needs pipeline output");
    if (opts.top_k > outputs->top_k)
      throw std::invalid_argument("top_k " + std::to_string(opts.top_k) + " exceeds the " +
                                  std::to_string(outputs->top_k) + " candidates that were prompted");
  }
  random::engine rng(opts.seed);
  std::vector<token_bag> bags;
  bags.reserve(records.size());
  for (const auto& r : records) {
    token_bag bag;
    for (const auto& t : description_tokens(r.description)) bag[t] += 1.0;
    std::vector<std::string> extra;
    if (opts.mode != feature_mode::bow) {
      const auto& s = outputs->at(r.id);
      const std::size_t k = std::min(opts.top_k, s.scored.size());
      switch (opts.mode) {
      case feature_mode::pr:
        for (std::size_t i = 0; i < k; ++i) extra.push_back(s.scored[i].token);
        break;
      case feature_mode::prent:
        for (const auto& c : s.select(opts.threshold, k).entailed) extra.push_back(c.token);
        break;
      case feature_mode::random:
        for (auto i : random::sample_without_replacement(k, opts.random_tokens, rng))
          extra.push_back(s.scored[i].token);
        break;
      case feature_mode::bow: break;
      }
    }
    for (const auto& t : extra) bag[std::string(candidate_prefix) + t] = 1.0;
    bags.push_back(std::move(bag));
  }
  return bags;
}

void vectorizer::fit(std::span<const token_bag> bags) {
  std::set<std::string> vocab;
  for (const auto& b : bags)
    for (const auto& [t, v] : b) vocab.insert(t);
  vocabulary_.assign(vocab.begin(), vocab.end());
  index_.clear();
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_[vocabulary_[i]] = static_cast<Eigen::Index>(i);
}

sparse_features vectorizer::transform(std::span<const token_bag> bags) const {
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t r = 0; r < bags.size(); ++r)
    for (const auto& [t, v] : bags[r])
      if (auto it = index_.find(t); it != index_.end())
        entries.emplace_back(static_cast<Eigen::Index>(r), it->second, v);
  sparse_features m(static_cast<Eigen::Index>(bags.size()), static_cast<Eigen::Index>(vocabulary_.size()));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

std::vector<std::string> labels_of(std::span<const event_record> records) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (!r.label) throw insufficient_data("record '" + r.id + "' has no label");
    out.push_back(*r.label);
  }
  return out;
}

metrics_report train_eval(const sparse_features& x_train, const std::vector<std::string>& y_train,
                          const sparse_features& x_test, const std::vector<std::string>& y_test,
                          const classifier_config& config) {
  logistic_regression lr(config);
  lr.fit(x_train, y_train);
  return classification_report(y_test, lr.predict(x_test));
}

metrics_report evaluate_mode(std::span<const event_record> train, std::span<const event_record> test,
                             const feature_options& opts, const pipeline_outputs* outputs,
                             const classifier_config& config) {
  // test rows use a stream continuing after the training rows in random mode
  auto train_opts = opts;
  auto test_opts = opts;
  test_opts.seed = opts.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto train_bags = featurize(train, train_opts, outputs);
  const auto test_bags = featurize(test, test_opts, outputs);
  vectorizer v;
  v.fit(train_bags);
  return train_eval(v.transform(train_bags), labels_of(train), v.transform(test_bags), labels_of(test), config);
}

std::vector<curve_point> learning_curve(std::span<const event_record> train, std::span<const event_record> test,
                                        const std::vector<std::size_t>& sizes,
                                        const std::vector<feature_mode>& modes, const feature_options& base,
                                        const pipeline_outputs* outputs, std::uint64_t seed,
                                        const classifier_config& config) {
  if (sizes.empty()) throw insufficient_data("no learning-curve sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > train.size())
      throw insufficient_data("learning-curve size " + std::to_string(sizes[i]) + " outside [1, " +
                              std::to_string(train.size()) + "]");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw insufficient_data("learning-curve sizes must increase");
  }
  std::vector<std::size_t> perm(train.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  random::engine rng(seed);
  random::shuffle(perm, rng);

  std::vector<curve_point> out;
  for (const auto n : sizes) {
    std::vector<std::size_t> idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(idx.begin(), idx.end());
    std::vector<event_record> subset;
    for (auto i : idx) subset.push_back(train[i]);
    for (const auto mode : modes) {
      auto opts = base;
      opts.mode = mode;
      const auto m = evaluate_mode(subset, test, opts, outputs, config);
      out.push_back({mode, n, m.accuracy, m.f1});
    }
  }
  return out;
}

sweep_parameter parse_sweep_parameter(std::string_view s) {
  if (s == "top_k" || s == "k") return sweep_parameter::top_k;
  if (s == "threshold" || s == "entail_threshold") return sweep_parameter::threshold;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(s) + "'");
}

std::string sweep_result::to_csv() const {
  std::string out = std::string(parameter == sweep_parameter::top_k ? "top_k" : "threshold") + ",f1,accuracy\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid[i], f1[i], accuracy[i]);
    out += buf;
  }
  return out;
}

sweep_result sweep(std::span<const event_record> train, std::span<const event_record> test,
                   sweep_parameter parameter, const std::vector<double>& grid, const feature_options& base,
                   const pipeline_outputs& outputs, const classifier_config& config) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
    if (parameter == sweep_parameter::threshold && !(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw std::invalid_argument("threshold grid values must lie in [0, 1]");
    if (parameter == sweep_parameter::top_k && (grid[i] < 0 || grid[i] != std::floor(grid[i])))
      throw std::invalid_argument("top_k grid values must be non-negative integers");
  }
  sweep_result res{parameter, grid, {}, {}};
  for (const double g : grid) {
    auto opts = base;
    opts.mode = feature_mode::prent;
    if (parameter == sweep_parameter::top_k)
      opts.top_k = static_cast<std::size_t>(g);
    else
      opts.threshold = g;
    const auto m = evaluate_mode(train, test, opts, &outputs, config);
    res.f1.push_back(m.f1);
    res.accuracy.push_back(m.accuracy);
  }
  return res;
}

nlohmann::json lethal_report::to_json() const {
  return {{"events", events}, {"pr", pr.to_json()}, {"prent", prent.to_json()}};
}

lethal_report lethal_rule_eval(std::span<const event_record> records, const pipeline_outputs& outputs,
                               const pipeline_config& config, const std::string& rule_token) {
  config.validate();
  if (config.top_k > outputs.top_k)
    throw std::invalid_argument("top_k exceeds the candidates that were prompted");
  std::vector<bool> truth, pr, prent;
  for (const auto& r : records) {
    if (!r.fatalities) throw missing_fatalities("record '" + r.id + "' has no fatality count");
    const auto& s = outputs.at(r.id);
    const std::size_t k = std::min(config.top_k, s.scored.size());
    bool in_candidates = false;
    for (std::size_t i = 0; i < k; ++i) in_candidates = in_candidates || s.scored[i].token == rule_token;
    const auto entailed = s.select(config.entail_threshold, k).token_set();
    const bool in_entailed = entailed.count(rule_token) != 0;
    if (in_entailed && !in_candidates) throw std::logic_error("entailed token outside the prompted candidates");
    truth.push_back(*r.fatalities >= 1);
    pr.push_back(in_candidates);
    prent.push_back(in_entailed);
  }
  lethal_report rep{binary_report(truth, pr), binary_report(truth, prent), records.size()};
  if (rep.pr.recall < rep.prent.recall || rep.prent.fp > rep.pr.fp)
    throw std::logic_error("PR-ENT positives are not a subset of PR positives");
  return rep;
}

prompt_template involves_template() { return {"involves", "This event involves [Z]."}; }
prompt_template people_template() { return {"people", "People were [Z]."}; }

} // namespace prent
