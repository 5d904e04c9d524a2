#include "prent/pipeline.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <atomic>
#include <exception>
#include <thread>

namespace prent {

event_description::event_description(std::string_view text)
    : text_(text::collapse_whitespace(text)) {
  if (text_.empty()) throw invalid_event("event description is empty");
}

void validate_template(const prompt_template& t) {
  if (t.id.empty()) throw invalid_template("template id is empty");
  const auto n = text::count_occurrences(t.text, mask_marker);
  if (n != 1)
    throw invalid_template("template '" + t.id + "' must contain exactly one " +
                           std::string(mask_marker) + " (found " + std::to_string(n) + ")");
  const auto trimmed = text::trim(t.text);
  const char last = trimmed.empty() ? '\0' : trimmed.back();
  if (last != '.' && last != '!' && last != '?')
    throw invalid_template("template '" + t.id + "' must end with terminal punctuation");
}

void pipeline_config::validate() const {
  if (top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  if (!(entail_threshold >= 0.0 && entail_threshold <= 1.0))
    throw std::invalid_argument("entail_threshold must lie in [0, 1]");
  if (constrained_vocab && constrained_vocab->empty())
    throw std::invalid_argument("constrained vocabulary must not be empty");
}

std::vector<std::string> candidate_set::tokens() const {
  std::vector<std::string> out;
  for (const auto& c : candidates) out.push_back(c.token);
  return out;
}

std::vector<std::string> entailed_set::tokens() const {
  std::vector<std::string> out;
  for (const auto& c : entailed) out.push_back(c.token);
  return out;
}

std::set<std::string> entailed_set::token_set() const {
  std::set<std::string> out;
  for (const auto& c : entailed) out.insert(c.token);
  return out;
}

entailed_set scored_set::select(double threshold, std::size_t k) const {
  entailed_set out{template_id, threshold, {}};
  for (std::size_t i = 0; i < scored.size() && i < k; ++i)
    if (scored[i].entail_probability >= threshold) out.entailed.push_back(scored[i]);
  return out;
}

std::string render_prompt(const event_description& event, const prompt_template& t) {
  return event.text() + " " + text::trim(t.text);
}

std::string fill_template(const prompt_template& t, std::string_view token) {
  return text::replace_all(text::trim(t.text), mask_marker, token);
}

candidate_set prompt_candidates(const mask_filler& fill, const event_description& event,
                                const prompt_template& t, const pipeline_config& config) {
  config.validate();
  validate_template(t);
  const auto prompt = render_prompt(event, t);
  candidate_set out{t.id, {}};
  if (!config.constrained_vocab) {
    for (auto& r : fill.fill_mask(prompt, config.top_k))
      out.candidates.push_back({std::move(r.token), r.probability});
    return out;
  }
  // scan the whole distribution, keep the most probable allowed tokens as-is
  for (auto& r : fill.fill_mask(prompt, std::numeric_limits<std::size_t>::max())) {
    if (out.candidates.size() == config.top_k) break;
    if (config.constrained_vocab->count(r.token))
      out.candidates.push_back({std::move(r.token), r.probability});
  }
  return out;
}

scored_set score_candidates(const entailment_model& nli, const event_description& event,
                            const prompt_template& t, const candidate_set& candidates) {
  std::vector<text_pair> pairs;
  pairs.reserve(candidates.candidates.size());
  for (const auto& c : candidates.candidates) pairs.push_back({event.text(), fill_template(t, c.token)});
  const auto scores = nli.entailment_probability_batch(pairs);
  scored_set out{t.id, {}};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& c = candidates.candidates[i];
    out.scored.push_back({c.token, c.fill_probability, scores[i].entail_probability});
  }
  return out;
}

entailed_set filter_entailed(const entailment_model& nli, const event_description& event,
                             const prompt_template& t, const candidate_set& candidates,
                             const pipeline_config& config) {
  config.validate();
  return score_candidates(nli, event, t, candidates).select(config.entail_threshold);
}

namespace {

void check_templates(std::span<const prompt_template> templates) {
  if (templates.empty()) throw invalid_templates("template list is empty");
  std::set<std::string> ids;
  for (const auto& t : templates)
    if (!ids.insert(t.id).second) throw invalid_templates("duplicate template id '" + t.id + "'");
}

} // namespace

prent_result pr_ent(const backends& models, const event_description& event,
                    std::span<const prompt_template> templates, const pipeline_config& config) {
  check_templates(templates);
  config.validate();
  prent_result out;
  for (const auto& t : templates) {
    template_outcome o;
    try {
      o.candidates = prompt_candidates(models.fill_model(), event, t, config);
      o.scored = score_candidates(models.nli_model(), event, t, *o.candidates);
      o.entailed = o.scored->select(config.entail_threshold);
    } catch (const std::exception& e) {
      o.entailed.reset();
      o.error = e.what();
      o.failure = std::current_exception();
    }
    out.emplace(t.id, std::move(o));
  }
  return out;
}

std::vector<prent_result> pr_ent_many(const backends& models,
                                      std::span<const event_description> events,
                                      std::span<const prompt_template> templates,
                                      const pipeline_config& config, unsigned workers) {
  check_templates(templates);
  config.validate();
  std::vector<prent_result> out(events.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(events.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < events.size(); ++i) out[i] = pr_ent(models, events[i], templates, config);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < events.size(); i = next++)
        out[i] = pr_ent(models, events[i], templates, config);
    });
  }
  pool.clear();
  return out;
}

nlohmann::json to_json(const entailed_set& set, std::string_view event_id) {
  nlohmann::json entailed = nlohmann::json::array();
  for (const auto& c : set.entailed)
    entailed.push_back({{"token", c.token}, {"fill_p", c.fill_probability}, {"entail_p", c.entail_probability}});
  return {{"event_id", event_id}, {"template_id", set.template_id}, {"entailed", entailed}};
}

std::map<std::string, std::set<std::string>> entailed_tokens(const prent_result& result) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [id, o] : result)
    if (o.entailed) out[id] = o.entailed->token_set();
  return out;
}

} // namespace prent
