#include <doctest.h>

#include "bundled.hpp"
#include "prent/benchmark.hpp"
#include "prent/error.hpp"

using namespace prent;

namespace {

event_record rec(std::string id, std::string desc, std::string label, std::optional<int> fatalities = std::nullopt) {
  event_record r;
  r.id = std::move(id);
  r.description = std::move(desc);
  r.label = std::move(label);
  r.fatalities = fatalities;
  return r;
}

/// outputs with the given (token, entail_p) lists per event, fill p decreasing
pipeline_outputs outputs_of(const std::map<std::string, std::vector<std::pair<std::string, double>>>& rows,
                            std::size_t top_k = 30) {
  pipeline_outputs o{"people", top_k, {}};
  for (const auto& [id, cands] : rows) {
    scored_set s{"people", {}};
    double p = 0.5;
    for (const auto& [tok, e] : cands) {
      s.scored.push_back({tok, p, e});
      p *= 0.9;
    }
    o.by_event.emplace(id, s);
  }
  return o;
}

std::size_t extra_features(const token_bag& bag) {
  std::size_t n = 0;
  for (const auto& [t, v] : bag) n += t.rfind(candidate_prefix, 0) == 0;
  return n;
}

} // namespace

TEST_CASE("description tokens") {
  CHECK(description_tokens("Two men, aged 12-15, were kidnapped! A") ==
        std::vector<std::string>{"two", "men", "aged", "12", "15", "were", "kidnapped"});
}

TEST_CASE("featurize modes") {
  const std::vector<event_record> rs{rec("a", "Shots fired at the market.", "Battles"),
                                     rec("b", "Crowd gathered.", "Protests")};
  std::vector<std::pair<std::string, double>> many;
  for (int i = 0; i < 40; ++i) many.emplace_back("t" + std::to_string(i), i < 3 ? 0.9 : 0.1);
  const auto out = outputs_of({{"a", many}, {"b", {{"x", 0.2}, {"y", 0.3}}}}, 40);

  feature_options bow;
  const auto base = featurize(rs, bow, nullptr);
  CHECK(extra_features(base[0]) == 0);
  CHECK(base[0].at("market") == 1.0);

  feature_options pr{feature_mode::pr, 30, 0.5, 10, 0};
  const auto prb = featurize(rs, pr, &out);
  CHECK(extra_features(prb[0]) == 30);
  CHECK(extra_features(prb[1]) == 2);

  feature_options pe{feature_mode::prent, 30, 0.5, 10, 0};
  const auto peb = featurize(rs, pe, &out);
  CHECK(extra_features(peb[0]) == 3);
  CHECK(peb[1] == base[1]); // nothing entailed: same row as bag of words

  feature_options rnd{feature_mode::random, 30, 0.5, 10, 0};
  const auto rb = featurize(rs, rnd, &out);
  CHECK(extra_features(rb[0]) == 10);
  CHECK(extra_features(rb[1]) == 2);

  CHECK_THROWS_AS(featurize(rs, pr, nullptr), missing_pipeline_output);
  feature_options wide{feature_mode::pr, 50, 0.5, 10, 0};
  CHECK_THROWS_AS(featurize(rs, wide, &out), std::invalid_argument);
}

TEST_CASE("random baseline marginals are uniform and seed-dependent") {
  // 1000 events sharing one 30-token candidate list; each column is drawn with p = 1/3
  std::map<std::string, std::vector<std::pair<std::string, double>>> rows;
  std::vector<event_record> rs;
  std::vector<std::pair<std::string, double>> cands;
  for (int i = 0; i < 30; ++i) cands.emplace_back("c" + std::to_string(i), 0.5);
  for (int i = 0; i < 1000; ++i) {
    const auto id = "r" + std::to_string(i);
    rows[id] = cands;
    rs.push_back(rec(id, "Nothing to see.", "x"));
  }
  const auto out = outputs_of(rows);
  auto marginals = [&](std::uint64_t seed, std::vector<token_bag>& bags) {
    feature_options o{feature_mode::random, 30, 0.5, 10, seed};
    bags = featurize(rs, o, &out);
    std::map<std::string, double> m;
    for (const auto& b : bags)
      for (const auto& [t, v] : b)
        if (t.rfind(candidate_prefix, 0) == 0) m[t] += 1;
    return m;
  };
  std::vector<token_bag> b1, b2;
  const auto m1 = marginals(1, b1), m2 = marginals(2, b2);
  CHECK(b1 != b2);
  // goodness of fit against 1000/3 per column; chi2(29) has its 0.999 quantile at 58.3
  double chi1 = 0, chi2 = 0, homog = 0;
  const double expected = 1000.0 / 3.0;
  for (int i = 0; i < 30; ++i) {
    const auto key = std::string(candidate_prefix) + "c" + std::to_string(i);
    const double a = m1.count(key) ? m1.at(key) : 0.0, b = m2.count(key) ? m2.at(key) : 0.0;
    chi1 += (a - expected) * (a - expected) / expected;
    chi2 += (b - expected) * (b - expected) / expected;
    homog += (a - b) * (a - b) / (a + b);
  }
  CHECK(chi1 < 58.3);
  CHECK(chi2 < 58.3);
  CHECK(homog < 58.3);
}

TEST_CASE("vectorizer keeps the training vocabulary") {
  vectorizer v;
  const std::vector<token_bag> train{{{"a", 1}, {"b", 2}}, {{"c", 1}}};
  v.fit(train);
  CHECK(v.vocabulary() == std::vector<std::string>{"a", "b", "c"});
  const std::vector<token_bag> test{{{"a", 1}, {"zzz", 5}}};
  const auto x = v.transform(test);
  CHECK(x.cols() == 3);
  CHECK(x.nonZeros() == 1);
  CHECK(x.coeff(0, 0) == 1);
}

TEST_CASE("pipeline outputs serialize") {
  const auto out = outputs_of({{"a", {{"killed", 0.9}, {"hurt", 0.2}}}});
  const auto back = pipeline_outputs::from_json(out.to_json());
  CHECK(back.top_k == out.top_k);
  CHECK(back.at("a").scored == out.at("a").scored);
  CHECK_THROWS(out.at("nope"));
}

TEST_CASE("lethal rule") {
  const std::vector<event_record> rs{rec("a", "x", "l", 0), rec("b", "y", "l", 3), rec("c", "z", "l", 1)};
  const auto out = outputs_of({{"a", {{"injured", 0.9}, {"wounded", 0.8}, {"killed", 0.1}}},
                               {"b", {{"killed", 0.95}}},
                               {"c", {{"hurt", 0.9}}}});
  const pipeline_config cfg;
  const auto r = lethal_rule_eval(rs, out, cfg);
  // a: PR says lethal (candidate), PR-ENT not (killed below threshold)
  CHECK(r.pr.tp == 1);
  CHECK(r.pr.fp == 1);
  CHECK(r.prent.tp == 1);
  CHECK(r.prent.fp == 0);
  CHECK(r.prent.fn == 1);
  auto missing = rs;
  missing[0].fatalities.reset();
  CHECK_THROWS_AS(lethal_rule_eval(missing, out, cfg), missing_fatalities);
}

TEST_CASE("sweep grid validation") {
  const auto& b = testing::bundled();
  feature_options fo;
  CHECK_THROWS(sweep(b.split.train, b.split.test, sweep_parameter::threshold, {0.5, 0.5}, fo, b.involves));
  CHECK_THROWS(sweep(b.split.train, b.split.test, sweep_parameter::threshold, {1.5}, fo, b.involves));
  CHECK_THROWS(sweep(b.split.train, b.split.test, sweep_parameter::top_k, {2.5}, fo, b.involves));
  CHECK_THROWS(sweep(b.split.train, b.split.test, sweep_parameter::top_k, {}, fo, b.involves));
  CHECK(parse_sweep_parameter("top_k") == sweep_parameter::top_k);
  CHECK_THROWS(parse_sweep_parameter("temperature"));
}

TEST_CASE("sweep endpoints on the bundled corpus") {
  const auto& b = testing::bundled();
  feature_options fo;
  fo.top_k = 30;
  fo.threshold = 0.5;
  const auto bow = evaluate_mode(b.split.train, b.split.test, {feature_mode::bow}, nullptr);
  auto pr_opts = fo;
  pr_opts.mode = feature_mode::pr;
  const auto pr = evaluate_mode(b.split.train, b.split.test, pr_opts, &b.involves);

  const auto t = sweep(b.split.train, b.split.test, sweep_parameter::threshold, {0.0, 0.5, 1.0}, fo, b.involves);
  CHECK(t.f1[0] == pr.f1);
  CHECK(t.f1[2] == bow.f1);
  const auto k = sweep(b.split.train, b.split.test, sweep_parameter::top_k, {0, 10, 40}, fo, b.involves);
  CHECK(k.f1[0] == bow.f1);
  const auto csv = t.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.rfind("threshold,f1,accuracy\n0,", 0) == 0);
}

TEST_CASE("learning curve") {
  const auto& b = testing::bundled();
  feature_options fo;
  const std::vector<feature_mode> modes{feature_mode::bow, feature_mode::prent};
  const auto pts = learning_curve(b.split.train, b.split.test, {10, 100}, modes, fo, &b.involves, 5);
  CHECK(pts.size() == 4);
  const auto full = learning_curve(b.split.train, b.split.test, {b.split.train.size()}, {feature_mode::prent}, fo,
                                   &b.involves, 5);
  auto opts = fo;
  opts.mode = feature_mode::prent;
  const auto direct = evaluate_mode(b.split.train, b.split.test, opts, &b.involves);
  CHECK(full[0].accuracy == direct.accuracy);
  CHECK(full[0].f1 == direct.f1);
  CHECK_THROWS_AS(learning_curve(b.split.train, b.split.test, {100, 10}, modes, fo, &b.involves, 5),
                  insufficient_data);
  CHECK_THROWS_AS(learning_curve(b.split.train, b.split.test, {601}, modes, fo, &b.involves, 5), insufficient_data);
}

TEST_CASE("bundled lethal ordering") {
  const auto& b = testing::bundled();
  const auto r = lethal_rule_eval(b.records, b.people, pipeline_config{});
  CHECK(r.events == b.records.size());
  CHECK(r.pr.recall >= r.prent.recall);
  CHECK(r.prent.fp <= r.pr.fp);
  CHECK(r.prent.precision > r.pr.precision);
}
