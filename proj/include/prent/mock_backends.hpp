#pragma once

#include "prent/backends.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>

namespace prent {

/// Exact-match lookup tables backing the mock backends.
///
/// File format (all sections optional):
///
///     {"fill_mask":  {"<text with [Z]>": [["token", p], ...]},
///      "entailment": {"<premise>": {"<hypothesis>": p}},
///      "qa":         {"<question>": {"<context>": {"text","start","end","confidence"} | null}}}
///
/// Fill lists must be sorted by non-increasing probability with distinct
/// tokens; a null QA entry records an abstention.
class mock_fixtures {
public:
  mock_fixtures() = default;

  static mock_fixtures from_json(const nlohmann::json& doc);
  static mock_fixtures load(const std::filesystem::path& path);
  static mock_fixtures load(const std::vector<std::filesystem::path>& paths);

  /// entries of other replace entries with the same key
  void merge(const mock_fixtures& other);

  void set_fill(std::string text, std::vector<mask_fill_result> results);
  void set_entailment(std::string premise, std::string hypothesis, double p);
  void set_answer(std::string question, std::string context, std::optional<span_answer> answer);

  const std::vector<mask_fill_result>* find_fill(std::string_view text) const;
  std::optional<double> find_entailment(std::string_view premise, std::string_view hypothesis) const;
  // outer nullopt: miss; inner nullopt: recorded abstention
  std::optional<std::optional<span_answer>> find_answer(std::string_view question,
                                                        std::string_view context) const;

  nlohmann::json to_json() const;

  std::size_t fill_entries() const { return fill_.size(); }
  std::size_t entailment_entries() const;
  std::size_t qa_entries() const;

private:
  std::map<std::string, std::vector<mask_fill_result>, std::less<>> fill_;
  std::map<std::string, std::map<std::string, double, std::less<>>, std::less<>> entail_;
  std::map<std::string, std::map<std::string, std::optional<span_answer>, std::less<>>,
           std::less<>>
      qa_;
};

class mock_mask_filler final : public mask_filler {
public:
  explicit mock_mask_filler(std::shared_ptr<const mock_fixtures> fixtures,
                            std::string id = "mock-fill");
  std::vector<mask_fill_result> fill_mask(std::string_view text_with_slot,
                                          std::size_t k) const override;
  std::string model_id() const override { return id_; }

private:
  std::shared_ptr<const mock_fixtures> fixtures_;
  std::string id_;
};

class mock_entailment_model final : public entailment_model {
public:
  explicit mock_entailment_model(std::shared_ptr<const mock_fixtures> fixtures,
                                 std::string id = "mock-nli");
  entailment_score entailment_probability(std::string_view premise,
                                          std::string_view hypothesis) const override;
  std::string model_id() const override { return id_; }

private:
  std::shared_ptr<const mock_fixtures> fixtures_;
  std::string id_;
};

class mock_question_answerer final : public question_answerer {
public:
  explicit mock_question_answerer(std::shared_ptr<const mock_fixtures> fixtures,
                                  std::string id = "mock-qa");
  span_answer extractive_answer(std::string_view question, std::string_view context,
                                double min_confidence = 0.0) const override;
  std::string model_id() const override { return id_; }

private:
  std::shared_ptr<const mock_fixtures> fixtures_;
  std::string id_;
};

/// All three mock backends over one shared fixture table.
backends make_mock_backends(std::shared_ptr<const mock_fixtures> fixtures);

/// Passes queries through to real backends and keeps every answer, so a run
/// can be replayed offline by the mock backends. Fill lists keep the longest
/// answer seen per text.
class fixture_recorder {
public:
  explicit fixture_recorder(backends inner);

  /// backends that forward to the inner ones and record
  backends recording() const;

  mock_fixtures snapshot() const;

private:
  class fill;
  class nli;
  class qa;

  struct shared {
    backends inner;
    mutable std::mutex lock;
    mock_fixtures table;
  };
  std::shared_ptr<shared> state_;
};

} // namespace prent
