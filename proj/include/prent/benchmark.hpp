#pragma once

#include "prent/classifier.hpp"
#include "prent/corpus.hpp"
#include "prent/metrics.hpp"
#include "prent/pipeline.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace prent {

enum class feature_mode { bow, pr, prent, random };

std::string to_string(feature_mode m);
feature_mode parse_feature_mode(std::string_view s);

/// Lowercased words of two or more word characters.
std::vector<std::string> description_tokens(std::string_view text);

/// Column prefix that keeps pipeline tokens apart from description words.
inline constexpr std::string_view candidate_prefix = "z::";

/// Per-event pipeline output for one template: every prompted candidate with
/// its entailment probability, prompted with top_k candidates.
struct pipeline_outputs {
  std::string template_id;
  std::size_t top_k = 0;
  std::map<std::string, scored_set> by_event;

  const scored_set& at(const std::string& event_id) const;

  nlohmann::json to_json() const;
  static pipeline_outputs from_json(const nlohmann::json& j);
};

/// Runs prompting and entailment scoring (no threshold) over the records.
pipeline_outputs run_pipeline(const backends& models, std::span<const event_record> records,
                              const prompt_template& t, const pipeline_config& config,
                              unsigned workers = 1);

struct feature_options {
  feature_mode mode = feature_mode::bow;
  std::size_t top_k = 30;
  double threshold = 0.5;
  std::size_t random_tokens = 10;
  std::uint64_t seed = 0;
};

/// bag of counted tokens per record
using token_bag = std::map<std::string, double>;

/// Description words plus, depending on the mode, prefixed candidate tokens.
std::vector<token_bag> featurize(std::span<const event_record> records, const feature_options& opts,
                                 const pipeline_outputs* outputs);

/// Column vocabulary fitted on training bags; unseen tokens are dropped on transform.
class vectorizer {
public:
  void fit(std::span<const token_bag> bags);
  sparse_features transform(std::span<const token_bag> bags) const;

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, Eigen::Index> index_;
};

std::vector<std::string> labels_of(std::span<const event_record> records);

/// Fits on train, reports on test.
metrics_report train_eval(const sparse_features& x_train, const std::vector<std::string>& y_train,
                          const sparse_features& x_test, const std::vector<std::string>& y_test,
                          const classifier_config& config = {});

/// featurize + vectorize + train_eval for one mode
metrics_report evaluate_mode(std::span<const event_record> train, std::span<const event_record> test,
                             const feature_options& opts, const pipeline_outputs* outputs,
                             const classifier_config& config = {});

struct curve_point {
  feature_mode mode;
  std::size_t size;
  double accuracy;
  double f1;
};

/// Nested training subsets from one seeded permutation; each subset keeps the
/// original record order, so the full size reproduces evaluate_mode exactly.
std::vector<curve_point> learning_curve(std::span<const event_record> train, std::span<const event_record> test,
                                        const std::vector<std::size_t>& sizes,
                                        const std::vector<feature_mode>& modes, const feature_options& base,
                                        const pipeline_outputs* outputs, std::uint64_t seed,
                                        const classifier_config& config = {});

enum class sweep_parameter { top_k, threshold };

sweep_parameter parse_sweep_parameter(std::string_view s);

struct sweep_result {
  sweep_parameter parameter;
  std::vector<double> grid;
  std::vector<double> f1;
  std::vector<double> accuracy;

  std::string to_csv() const;
};

/// PR-ENT features at each grid value (the other parameter from `base`).
sweep_result sweep(std::span<const event_record> train, std::span<const event_record> test,
                   sweep_parameter parameter, const std::vector<double>& grid, const feature_options& base,
                   const pipeline_outputs& outputs, const classifier_config& config = {});

struct lethal_report {
  binary_metrics pr;
  binary_metrics prent;
  std::size_t events = 0;

  nlohmann::json to_json() const;
};

/// Lethal iff the rule token is among the prompted candidates (PR) or the
/// entailed candidates (PR-ENT); ground truth lethal iff fatalities >= 1.
/// The structural PR superset relation is checked on every call.
lethal_report lethal_rule_eval(std::span<const event_record> records, const pipeline_outputs& outputs,
                               const pipeline_config& config, const std::string& rule_token = "killed");

/// templates the benchmarks use
prompt_template involves_template();
prompt_template people_template();

} // namespace prent
