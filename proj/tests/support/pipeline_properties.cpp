#include "pipeline_properties.hpp"

#include <algorithm>

namespace prent::testing {

namespace {

const std::vector<std::string> words{"killed", "injured", "protests", "violence", "arrested", "wounded", "hurt",
                                     "kidnapped", "riots", "looting", "theft", "shelling", "fighting", "clashes",
                                     "strikes", "fireworks", "bicycles", "detained", "evacuated", "shot", "homeless",
                                     "cycling", "suicide", "demonstrations", "motorcycles", "bombing", "rape",
                                     "abducted", "robbery", "hospitalized", "there", "present", "gathered", "released",
                                     "displaced", "missing", "beaten", "threatened", "attacked", "fire"};

const std::vector<std::string> templates{"People were [Z].", "This event involves [Z].", "This event is about [Z].",
                                         "The victims were [Z]!", "Was anyone [Z]?"};

/// probabilities with frequent ties and the exact endpoints 0, 0.5 and 1
double awkward_probability(random::engine& rng) {
  const auto r = random::uniform_below(rng, 10);
  if (r == 0) return 0.0;
  if (r == 1) return 1.0;
  if (r == 2) return 0.5;
  if (r == 3) return static_cast<double>(random::uniform_below(rng, 5)) / 4.0;
  return random::uniform_unit(rng);
}

} // namespace

random_case make_random_case(random::engine& rng, std::size_t index) {
  random_case c;
  const auto n_words = 1 + random::uniform_below(rng, 12);
  std::string ev = "Event " + std::to_string(index);
  for (std::uint64_t i = 0; i < n_words; ++i) ev += " " + words[random::uniform_below(rng, words.size())];
  c.event = ev + ".";
  c.templ = {"t" + std::to_string(random::uniform_below(rng, 3)), templates[random::uniform_below(rng, templates.size())]};
  c.fixtures = std::make_shared<mock_fixtures>();

  c.candidates = 1 + random::uniform_below(rng, words.size());
  auto picks = random::sample_without_replacement(words.size(), c.candidates, rng);
  std::vector<double> probs;
  for (std::size_t i = 0; i < picks.size(); ++i) probs.push_back(random::uniform_unit(rng));
  // ties in fill probability as well
  if (probs.size() > 2 && random::uniform_below(rng, 4) == 0) probs[1] = probs[0];
  std::sort(probs.rbegin(), probs.rend());
  std::vector<mask_fill_result> fills;
  const event_description e(c.event);
  for (std::size_t i = 0; i < picks.size(); ++i) {
    fills.push_back({words[picks[i]], probs[i]});
    c.fixtures->set_entailment(e.text(), fill_template(c.templ, words[picks[i]]), awkward_probability(rng));
  }
  c.fixtures->set_fill(render_prompt(e, c.templ), fills);
  return c;
}

std::size_t property_tally::total_violations() const {
  std::size_t n = 0;
  for (const auto& [k, v] : violations) n += v;
  return n;
}

property_tally check_pipeline_properties(std::size_t cases, std::uint64_t seed) {
  random::engine rng(seed);
  property_tally tally;
  for (const char* p : {"subset", "threshold_monotonicity", "k_monotonicity", "threshold_zero_identity", "determinism"})
    tally.violations[p] = 0;

  auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };

  for (std::size_t i = 0; i < cases; ++i) {
    const auto c = make_random_case(rng, i);
    const auto models = make_mock_backends(c.fixtures);
    const event_description event(c.event);
    const std::vector<prompt_template> ts{c.templ};

    pipeline_config cfg;
    cfg.top_k = 1 + random::uniform_below(rng, c.candidates + 5);
    cfg.entail_threshold = awkward_probability(rng);

    // subset: straight through the public pipeline
    const auto result = pr_ent(models, event, ts, cfg);
    const auto& o = result.at(c.templ.id);
    if (!o.ok() || !subset(o.entailed->token_set(), [&] {
          const auto t = o.candidates->tokens();
          return std::set<std::string>(t.begin(), t.end());
        }()))
      ++tally.violations["subset"];
    for (const auto& e : o.entailed ? o.entailed->entailed : std::vector<entailed_candidate>{})
      if (e.entail_probability < cfg.entail_threshold) ++tally.violations["subset"];

    // threshold monotonicity: t1 <= t2 => entailed(t2) ⊆ entailed(t1)
    {
      double t1 = awkward_probability(rng), t2 = awkward_probability(rng);
      if (t1 > t2) std::swap(t1, t2);
      auto a = cfg, b = cfg;
      a.entail_threshold = t1;
      b.entail_threshold = t2;
      const auto cand = prompt_candidates(models.fill_model(), event, c.templ, cfg);
      const auto e1 = filter_entailed(models.nli_model(), event, c.templ, cand, a);
      const auto e2 = filter_entailed(models.nli_model(), event, c.templ, cand, b);
      if (!subset(e2.token_set(), e1.token_set())) ++tally.violations["threshold_monotonicity"];
    }

    // K monotonicity: K1 <= K2 => entailed(K1) ⊆ entailed(K2)
    {
      std::size_t k1 = 1 + random::uniform_below(rng, c.candidates + 3);
      std::size_t k2 = 1 + random::uniform_below(rng, c.candidates + 3);
      if (k1 > k2) std::swap(k1, k2);
      auto a = cfg, b = cfg;
      a.top_k = k1;
      b.top_k = k2;
      const auto r1 = pr_ent(models, event, ts, a).at(c.templ.id);
      const auto r2 = pr_ent(models, event, ts, b).at(c.templ.id);
      if (!r1.ok() || !r2.ok() || !subset(r1.entailed->token_set(), r2.entailed->token_set()))
        ++tally.violations["k_monotonicity"];
    }

    // threshold 0 keeps every candidate, in order
    {
      auto z = cfg;
      z.entail_threshold = 0.0;
      const auto r = pr_ent(models, event, ts, z).at(c.templ.id);
      if (!r.ok() || r.entailed->tokens() != r.candidates->tokens()) ++tally.violations["threshold_zero_identity"];
    }

    // determinism
    {
      const auto again = pr_ent(models, event, ts, cfg).at(c.templ.id);
      if (!again.ok() || again.entailed->entailed != o.entailed->entailed ||
          again.candidates->candidates != o.candidates->candidates)
        ++tally.violations["determinism"];
    }
    ++tally.cases;
  }
  return tally;
}

} // namespace prent::testing
