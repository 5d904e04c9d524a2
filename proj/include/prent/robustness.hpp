#pragma once

#include "prent/pipeline.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace prent {

/// The most frequent prompted tokens of one template over a corpus.
struct fixed_vocab {
  std::string template_id;
  std::vector<std::string> tokens;

  std::set<std::string> token_set() const { return {tokens.begin(), tokens.end()}; }
};

/// Counts candidate occurrences over the corpus (top_k per event) and keeps
/// the `size` most frequent, ties broken lexicographically.
fixed_vocab build_fixed_vocab(const mask_filler& fill, std::span<const event_description> corpus,
                              const prompt_template& t, std::size_t size, const pipeline_config& config);

/// Probabilities aligned to a fixed_vocab; `empty` when no mass survived.
struct token_distribution {
  Eigen::VectorXd probabilities;
  bool empty = false;
};

enum class distribution_mode { pr, prent };

struct distribution_pair {
  token_distribution pr;
  token_distribution prent;
};

/// Fill probabilities of the top_k candidates inside the vocabulary.
/// PR renormalizes them; PR-ENT first zeroes candidates below the entailment
/// threshold. Both modes come from the same candidate set.
distribution_pair token_distributions(const backends& models, const event_description& event,
                                      const prompt_template& t, const fixed_vocab& vocab,
                                      const pipeline_config& config);

token_distribution token_distribution_for(const backends& models, const event_description& event,
                                          const prompt_template& t, const fixed_vocab& vocab,
                                          distribution_mode mode, const pipeline_config& config);

/// sqrt of the natural-log Jensen-Shannon divergence of two non-negative
/// vectors, each normalized to unit mass first.
template <typename A, typename B>
double js_distance(const Eigen::MatrixBase<A>& p_raw, const Eigen::MatrixBase<B>& q_raw) {
  const Eigen::VectorXd p = p_raw.template cast<double>() / p_raw.template cast<double>().sum();
  const Eigen::VectorXd q = q_raw.template cast<double>() / q_raw.template cast<double>().sum();
  const Eigen::VectorXd m = 0.5 * (p + q);
  auto rel = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] > 0) s += x[i] * std::log(x[i] / y[i]);
    return s;
  };
  return std::sqrt(std::max(0.0, 0.5 * (rel(p, m) + rel(q, m))));
}

/// throws vocab_mismatch / empty_distribution
double js_distance(const token_distribution& p, const token_distribution& q);

//
// perturbations

enum class perturbation_kind { identity, paraphrase, stopword_removal, entity_removal, duplication };

std::string to_string(perturbation_kind k);
perturbation_kind parse_perturbation_kind(std::string_view s);

std::vector<std::string> default_paraphrases();
/// the vendored English stop-word list
const std::set<std::string>& default_stopwords();

struct perturbation_spec {
  perturbation_kind kind = perturbation_kind::identity;
  int intensity = 1;
  /// paraphrases[0] is the unperturbed template; intensity i selects paraphrases[i]
  std::vector<std::string> paraphrases = default_paraphrases();
  std::set<std::string> stopwords = default_stopwords();
  /// entity kind ("ORG", "LOC", "PER", "MISC") -> placeholder word
  std::map<std::string, std::string> placeholders{
      {"ORG", "organizations"}, {"LOC", "locations"}, {"PER", "people"}, {"MISC", "organizations"}};
  std::string duplicate_word = "event";

  void validate() const;
  std::string label() const;

  static perturbation_spec from_json(const nlohmann::json& j);
};

struct entity_span {
  std::size_t begin;
  std::size_t end;
  std::string kind;
};

class entity_recognizer {
public:
  virtual ~entity_recognizer() = default;
  virtual std::vector<entity_span> find(std::string_view text) const = 0;
};

/// Offline fallback: anonymization placeholders ([ORG], [LOC], [NAME]) and runs
/// of capitalized words that do not open a sentence, typed LOC after a
/// locative preposition and ORG otherwise.
class capitalized_span_recognizer final : public entity_recognizer {
public:
  std::vector<entity_span> find(std::string_view text) const override;
};

struct perturbed_input {
  std::string event;
  prompt_template templ;
  std::vector<std::string> warnings;
};

/// Pure and deterministic. Entity removal on entity-free text returns the
/// input unchanged with a warning.
perturbed_input perturb(const event_description& event, const prompt_template& t, const perturbation_spec& spec,
                        const entity_recognizer* recognizer = nullptr);

std::string remove_stopwords(std::string_view text, const std::set<std::string>& stopwords);

//
// report

struct mode_summary {
  double mean = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

struct robustness_row {
  std::string label;
  perturbation_spec spec;
  mode_summary pr;
  mode_summary prent;
  std::size_t warnings = 0;
};

struct robustness_report {
  fixed_vocab vocab;
  std::size_t events = 0;
  std::vector<robustness_row> rows;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

/// Mean distance between each event's unperturbed and perturbed distribution
/// per mode; pairs with an EMPTY side are skipped and counted.
robustness_report run_robustness(const backends& models, std::span<const event_description> corpus,
                                 const prompt_template& t, const std::vector<perturbation_spec>& specs,
                                 const fixed_vocab& vocab, const pipeline_config& config,
                                 const entity_recognizer* recognizer = nullptr);

/// mean by ascending-order summation, independent of input order
double order_free_mean(std::vector<double> values);

} // namespace prent
