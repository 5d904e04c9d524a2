#pragma once

#include "prent/backends.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace prent {

/// One event description, whitespace-normalized. Never empty.
class event_description {
public:
  explicit event_description(std::string_view text);

  const std::string& text() const noexcept { return text_; }

private:
  std::string text_;
};

/// Prompt text with exactly one mask_marker, ending in '.', '!' or '?'.
struct prompt_template {
  std::string id;
  std::string text;

  friend bool operator==(const prompt_template&, const prompt_template&) = default;
};

/// Throws invalid_template when t breaks the template invariants.
void validate_template(const prompt_template& t);

struct pipeline_config {
  std::size_t top_k = 30;
  double entail_threshold = 0.5;
  /// when set, candidates are the top_k fills found inside this set
  std::optional<std::set<std::string>> constrained_vocab;

  void validate() const;
};

struct candidate {
  std::string token;
  double fill_probability = 0.0;

  friend bool operator==(const candidate&, const candidate&) = default;
};

struct candidate_set {
  std::string template_id;
  std::vector<candidate> candidates; ///< non-increasing fill_probability

  std::vector<std::string> tokens() const;
};

struct entailed_candidate {
  std::string token;
  double fill_probability = 0.0;
  double entail_probability = 0.0;

  friend bool operator==(const entailed_candidate&, const entailed_candidate&) = default;
};

struct entailed_set {
  std::string template_id;
  double threshold = 0.0;
  std::vector<entailed_candidate> entailed; ///< candidate order

  std::vector<std::string> tokens() const;
  std::set<std::string> token_set() const;
};

/// Every candidate with its entailment probability, before thresholding.
/// select() derives the entailed set for any (k, threshold) no larger than
/// the k the candidates were prompted with.
struct scored_set {
  std::string template_id;
  std::vector<entailed_candidate> scored;

  entailed_set select(double threshold,
                      std::size_t k = std::numeric_limits<std::size_t>::max()) const;
};

/// "<event> <template>"
std::string render_prompt(const event_description& event, const prompt_template& t);

/// template text with the slot replaced verbatim by token
std::string fill_template(const prompt_template& t, std::string_view token);

candidate_set prompt_candidates(const mask_filler& fill, const event_description& event,
                                const prompt_template& t, const pipeline_config& config);

scored_set score_candidates(const entailment_model& nli, const event_description& event,
                            const prompt_template& t, const candidate_set& candidates);

entailed_set filter_entailed(const entailment_model& nli, const event_description& event,
                             const prompt_template& t, const candidate_set& candidates,
                             const pipeline_config& config);

/// Result for one template; exactly one of entailed / error is set.
struct template_outcome {
  std::optional<candidate_set> candidates;
  std::optional<scored_set> scored;
  std::optional<entailed_set> entailed;
  std::optional<std::string> error;
  std::exception_ptr failure; ///< the exception behind error

  bool ok() const { return entailed.has_value(); }
};

using prent_result = std::map<std::string, template_outcome>;

/// Runs prompting and entailment filtering for every template. An empty list
/// or repeated ids raise invalid_templates; failures inside one template are
/// recorded in its outcome.
prent_result pr_ent(const backends& models, const event_description& event,
                    std::span<const prompt_template> templates, const pipeline_config& config);

/// pr_ent over many events, spread over `workers` threads; output order follows input.
std::vector<prent_result> pr_ent_many(const backends& models,
                                      std::span<const event_description> events,
                                      std::span<const prompt_template> templates,
                                      const pipeline_config& config, unsigned workers = 1);

/// {event_id, template_id, entailed:[{token, fill_p, entail_p}]}
nlohmann::json to_json(const entailed_set& set, std::string_view event_id);

/// template_id -> entailed tokens, for the successful outcomes only
std::map<std::string, std::set<std::string>> entailed_tokens(const prent_result& result);

} // namespace prent
