#pragma once

#include "prent/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace prent {

struct literal {
  std::string template_id;
  std::string token;
  bool negated = false;

  friend auto operator<=>(const literal&, const literal&) = default;
};

/// Disjunction of conjunctions of literals.
struct rule {
  std::vector<std::vector<literal>> clauses;

  friend bool operator==(const rule&, const rule&) = default;
};

/// template id -> tokens entailed for that template
using entailment_map = std::map<std::string, std::set<std::string>>;

/// DNF evaluation; throws unknown_template when a literal's template is not a key.
bool evaluate_rule(const rule& r, const entailment_map& entailed);

/// "people:arrested AND NOT people:kidnapped OR ..."
std::string describe(const rule& r);

struct codebook {
  std::string name;
  std::string version;
  std::map<std::string, prompt_template> templates;
  std::map<std::string, rule> event_types;

  friend bool operator==(const codebook&, const codebook&) = default;

  std::vector<prompt_template> template_list() const;

  /// throws schema_violation on dangling template ids, empty clauses and the like
  void validate() const;
};

/// all event types whose rule holds
std::set<std::string> apply_codebook(const codebook& cb, const entailment_map& entailed);

/// Runs the pipeline over the codebook's templates and applies its rules.
/// A template that failed in the pipeline raises its error here.
std::set<std::string> code_event(const backends& models, const event_description& event,
                                 const codebook& cb, const pipeline_config& config);

codebook import_codebook(const nlohmann::json& document);
nlohmann::json export_codebook(const codebook& cb);

codebook load_codebook(const std::filesystem::path& path);
void save_codebook(const codebook& cb, const std::filesystem::path& path);

/// One reviewed event of an on-the-go validation session.
struct labeled_event {
  std::string event_id;
  std::string description;
  std::set<std::string> suggested;
  std::set<std::string> accepted;
  std::string timestamp; ///< ISO-8601 UTC

  friend bool operator==(const labeled_event&, const labeled_event&) = default;
};

/// Reviewer feedback on suggested event types, growing a labeled dataset.
/// Per-class accuracy scores the binary decision "class c suggested" against
/// "class c accepted" over all recorded events.
class validation_session {
public:
  validation_session() = default;
  validation_session(std::string id, std::string codebook_name, std::set<std::string> classes);

  const std::string& id() const { return id_; }
  const std::string& codebook_name() const { return codebook_; }
  const std::vector<labeled_event>& labeled() const { return labeled_; }
  bool contains(std::string_view event_id) const;

  /// throws duplicate_event when event_id is already recorded
  std::map<std::string, double> record_feedback(labeled_event entry);

  /// classes known to the session plus any seen in feedback
  std::set<std::string> classes() const;
  std::map<std::string, double> per_class_accuracy() const;

  /// accepted types that were not suggested
  static std::set<std::string> manual_additions(const labeled_event& e);

  nlohmann::json to_json() const;
  static validation_session from_json(const nlohmann::json& j);

  /// JSON lines {event_id, description, suggested, accepted, timestamp}
  std::string export_jsonl() const;

  /// sampling cursor used by the service's review queue
  std::size_t cursor = 0;
  std::uint64_t seed = 0;

private:
  std::string id_;
  std::string codebook_;
  std::set<std::string> classes_;
  std::vector<labeled_event> labeled_;
};

/// current UTC time as "YYYY-MM-DDTHH:MM:SSZ"
std::string utc_timestamp();

} // namespace prent
