#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Contracts for the three pretrained-model capabilities the pipeline consumes.
// Implementations are immutable after construction and every query method is
// const and safe to call from several threads at once.
namespace prent {

/// Toolkit-level slot marker; each backend maps it to its own mask token.
inline constexpr std::string_view mask_marker = "[Z]";

struct mask_fill_result {
  std::string token;
  double probability = 0.0;

  friend bool operator==(const mask_fill_result&, const mask_fill_result&) = default;
};

struct entailment_score {
  /// p(entail) of the three-way softmax; neutral and contradiction mass discarded
  double entail_probability = 0.0;
};

struct span_answer {
  std::string text;
  std::size_t start = 0; ///< byte offset into the context
  std::size_t end = 0;   ///< one past the last byte
  double confidence = 0.0;

  friend bool operator==(const span_answer&, const span_answer&) = default;
};

struct text_pair {
  std::string first;
  std::string second;
};

/// Throws missing_mask unless text contains exactly one mask_marker.
void require_single_mask(std::string_view text);

class mask_filler {
public:
  virtual ~mask_filler() = default;

  /// The k most probable single-token fills for the slot, sorted by
  /// non-increasing probability, tokens pairwise distinct.
  virtual std::vector<mask_fill_result> fill_mask(std::string_view text_with_slot,
                                                  std::size_t k) const = 0;

  /// Order-preserving batch variant.
  virtual std::vector<std::vector<mask_fill_result>>
  fill_mask_batch(std::span<const std::string> texts, std::size_t k) const;

  virtual std::string model_id() const = 0;
};

class entailment_model {
public:
  virtual ~entailment_model() = default;

  virtual entailment_score entailment_probability(std::string_view premise,
                                                  std::string_view hypothesis) const = 0;

  virtual std::vector<entailment_score>
  entailment_probability_batch(std::span<const text_pair> pairs) const;

  virtual std::string model_id() const = 0;
};

class question_answerer {
public:
  virtual ~question_answerer() = default;

  /// Best span of context answering question. Throws no_answer when the model
  /// prefers the null answer or the best span scores below min_confidence.
  virtual span_answer extractive_answer(std::string_view question, std::string_view context,
                                        double min_confidence = 0.0) const = 0;

  /// Order-preserving batch variant; abstentions come back as nullopt.
  virtual std::vector<std::optional<span_answer>>
  extractive_answer_batch(std::span<const text_pair> pairs, double min_confidence = 0.0) const;

  virtual std::string model_id() const = 0;
};

/// The model triple a pipeline runs against. Any member may be empty when the
/// caller only needs a subset (e.g. no QA outside role extraction).
struct backends {
  std::shared_ptr<const mask_filler> fill;
  std::shared_ptr<const entailment_model> nli;
  std::shared_ptr<const question_answerer> qa;

  const mask_filler& fill_model() const;
  const entailment_model& nli_model() const;
  const question_answerer& qa_model() const;
};

} // namespace prent
