#pragma once

#include "prent/backends.hpp"
#include "prent/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace prent {

struct role_questions {
  std::string who;  ///< "Who {action} people?"
  std::string whom; ///< "Who was {action}?"
};

/// The action is inserted verbatim, with no conjugation.
role_questions build_role_questions(std::string_view action);

/// Heuristic check for a past-participle form ("-ed" or a common irregular).
bool looks_like_participle(std::string_view action);

struct role_config {
  double min_confidence = 0.1;
};

struct role_result {
  std::string action;
  std::optional<span_answer> who;
  std::optional<span_answer> whom;
  std::vector<std::string> warnings;
};

/// Asks both questions against the event description. Answers below the
/// confidence floor, or abstentions, come back empty.
role_result extract_roles(const question_answerer& qa, const event_description& event, std::string_view action,
                          const role_config& config = {});

/// {event_id, action, who:{text,start,end,conf}?, whom:{...}?}
nlohmann::json to_json(const role_result& r, std::string_view event_id);

} // namespace prent
