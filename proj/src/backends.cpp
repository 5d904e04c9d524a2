#include "prent/backends.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

namespace prent {

void require_single_mask(std::string_view text) {
  const auto n = text::count_occurrences(text, mask_marker);
  if (n != 1)
    throw missing_mask("expected exactly one " + std::string(mask_marker) + " marker, found " +
                       std::to_string(n));
}

std::vector<std::vector<mask_fill_result>>
mask_filler::fill_mask_batch(std::span<const std::string> texts, std::size_t k) const {
  std::vector<std::vector<mask_fill_result>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(fill_mask(t, k));
  return out;
}

std::vector<entailment_score>
entailment_model::entailment_probability_batch(std::span<const text_pair> pairs) const {
  std::vector<entailment_score> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(entailment_probability(p.first, p.second));
  return out;
}

std::vector<std::optional<span_answer>>
question_answerer::extractive_answer_batch(std::span<const text_pair> pairs,
                                           double min_confidence) const {
  std::vector<std::optional<span_answer>> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    try {
      out.emplace_back(extractive_answer(p.first, p.second, min_confidence));
    } catch (const no_answer&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

const mask_filler& backends::fill_model() const {
  if (!fill) throw backend_unavailable("no fill-mask backend configured");
  return *fill;
}

const entailment_model& backends::nli_model() const {
  if (!nli) throw backend_unavailable("no entailment backend configured");
  return *nli;
}

const question_answerer& backends::qa_model() const {
  if (!qa) throw backend_unavailable("no question-answering backend configured");
  return *qa;
}

} // namespace prent
