#include "prent/roles.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <set>

namespace prent {

role_questions build_role_questions(std::string_view action) {
  const std::string a(action);
  return {"Who " + a + " people?", "Who was " + a + "?"};
}

bool looks_like_participle(std::string_view action) {
  static const std::set<std::string, std::less<>> irregular{
      "shot",   "hit",    "beaten", "taken",  "stolen", "struck", "hurt",   "held",   "caught",
      "bitten", "burnt",  "fought", "seized", "slain",  "stabbed", "thrown", "driven", "hidden",
      "bound",  "broken", "beat",   "blown",  "bombed", "burned", "led",    "sent",   "spent",
      "cut",    "set",    "put",    "forced", "kept",   "left",   "lost",   "met",    "paid"};
  const auto lower = text::to_lower_ascii(action);
  if (lower.size() > 3 && text::ends_with(lower, "ed")) return true;
  return irregular.count(lower) != 0;
}

role_result extract_roles(const question_answerer& qa, const event_description& event, std::string_view action,
                          const role_config& config) {
  const auto trimmed = text::trim(action);
  if (trimmed.empty() || trimmed.find(' ') != std::string_view::npos)
    throw std::invalid_argument("action must be a single token");
  role_result r{std::string(trimmed), std::nullopt, std::nullopt, {}};
  if (!looks_like_participle(trimmed))
    r.warnings.push_back("action '" + r.action + "' is not a past participle; questions may be ill-formed");
  const auto q = build_role_questions(trimmed);
  auto ask = [&](const std::string& question) -> std::optional<span_answer> {
    try {
      return qa.extractive_answer(question, event.text(), config.min_confidence);
    } catch (const no_answer&) {
      return std::nullopt;
    }
  };
  r.who = ask(q.who);
  r.whom = ask(q.whom);
  return r;
}

nlohmann::json to_json(const role_result& r, std::string_view event_id) {
  auto span = [](const span_answer& a) {
    return nlohmann::json{{"text", a.text}, {"start", a.start}, {"end", a.end}, {"conf", a.confidence}};
  };
  nlohmann::json j{{"event_id", event_id}, {"action", r.action}};
  if (r.who) j["who"] = span(*r.who);
  if (r.whom) j["whom"] = span(*r.whom);
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

} // namespace prent
