#include "prent/codebook.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace prent {

using nlohmann::json;

bool evaluate_rule(const rule& r, const entailment_map& entailed) {
  bool any = false;
  // evaluate every literal so that unknown templates are always reported
  for (const auto& clause : r.clauses) {
    bool all = true;
    for (const auto& lit : clause) {
      auto it = entailed.find(lit.template_id);
      if (it == entailed.end()) throw unknown_template("no entailed set for template '" + lit.template_id + "'");
      const bool present = it->second.count(lit.token) != 0;
      all = all && (lit.negated ? !present : present);
    }
    any = any || all;
  }
  return any;
}

std::string describe(const rule& r) {
  std::vector<std::string> clauses;
  for (const auto& clause : r.clauses) {
    std::string s;
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (i > 0) s += " AND ";
      if (clause[i].negated) s += "NOT ";
      s += clause[i].template_id + ":" + clause[i].token;
    }
    clauses.push_back(clause.size() > 1 && r.clauses.size() > 1 ? "(" + s + ")" : s);
  }
  return text::join(clauses, " OR ");
}

std::vector<prompt_template> codebook::template_list() const {
  std::vector<prompt_template> out;
  for (const auto& [id, t] : templates) out.push_back(t);
  return out;
}

void codebook::validate() const {
  if (name.empty()) throw schema_violation("$.name", "must be a non-empty string");
  for (const auto& [id, t] : templates) {
    if (t.id != id) throw schema_violation("$.templates." + id, "template id mismatch");
    try {
      validate_template(t);
    } catch (const invalid_template& e) {
      throw schema_violation("$.templates." + id + ".text", e.what());
    }
  }
  for (const auto& [type, r] : event_types) {
    const auto base = "$.event_types." + type + ".any_of";
    if (type.empty()) throw schema_violation("$.event_types", "event type names must be non-empty");
    if (r.clauses.empty()) throw schema_violation(base, "must list at least one clause");
    for (std::size_t c = 0; c < r.clauses.size(); ++c) {
      const auto cpath = base + "[" + std::to_string(c) + "].all_of";
      if (r.clauses[c].empty()) throw schema_violation(cpath, "must list at least one literal");
      std::set<literal> seen;
      for (std::size_t l = 0; l < r.clauses[c].size(); ++l) {
        const auto& lit = r.clauses[c][l];
        const auto lpath = cpath + "[" + std::to_string(l) + "]";
        if (!templates.count(lit.template_id))
          throw schema_violation(lpath + ".template", "unknown template '" + lit.template_id + "'");
        if (lit.token.empty()) throw schema_violation(lpath + ".token", "must be non-empty");
        if (!seen.insert(lit).second) throw schema_violation(lpath, "duplicate literal in clause");
      }
    }
  }
}

std::set<std::string> apply_codebook(const codebook& cb, const entailment_map& entailed) {
  std::set<std::string> out;
  for (const auto& [type, r] : cb.event_types)
    if (evaluate_rule(r, entailed)) out.insert(type);
  return out;
}

std::set<std::string> code_event(const backends& models, const event_description& event,
                                 const codebook& cb, const pipeline_config& config) {
  const auto templates = cb.template_list();
  const auto result = pr_ent(models, event, templates, config);
  for (const auto& [id, o] : result)
    if (o.failure) std::rethrow_exception(o.failure);
  return apply_codebook(cb, entailed_tokens(result));
}

namespace {

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw schema_violation(path + "." + key, "missing");
  return obj.at(key);
}

std::string string_at(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = member(obj, key, path);
  if (!v.is_string()) throw schema_violation(path + "." + key, "expected a string");
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw schema_violation(path + "." + k, "unexpected field");
  }
}

} // namespace

codebook import_codebook(const json& doc) {
  if (!doc.is_object()) throw schema_violation("$", "expected an object");
  only_keys(doc, {"name", "version", "templates", "event_types"}, "$");
  codebook cb;
  cb.name = string_at(doc, "name", "$");
  cb.version = string_at(doc, "version", "$");
  const auto& templates = member(doc, "templates", "$");
  if (!templates.is_object()) throw schema_violation("$.templates", "expected an object");
  for (const auto& [id, t] : templates.items()) {
    const auto path = "$.templates." + id;
    if (!t.is_object()) throw schema_violation(path, "expected an object");
    only_keys(t, {"text"}, path);
    cb.templates[id] = prompt_template{id, string_at(t, "text", path)};
  }
  const auto& types = member(doc, "event_types", "$");
  if (!types.is_object()) throw schema_violation("$.event_types", "expected an object");
  for (const auto& [name, r] : types.items()) {
    const auto path = "$.event_types." + name;
    if (!r.is_object()) throw schema_violation(path, "expected an object");
    only_keys(r, {"any_of"}, path);
    const auto& any_of = member(r, "any_of", path);
    if (!any_of.is_array()) throw schema_violation(path + ".any_of", "expected an array");
    rule parsed;
    for (std::size_t c = 0; c < any_of.size(); ++c) {
      const auto cpath = path + ".any_of[" + std::to_string(c) + "]";
      if (!any_of[c].is_object()) throw schema_violation(cpath, "expected an object");
      only_keys(any_of[c], {"all_of"}, cpath);
      const auto& all_of = member(any_of[c], "all_of", cpath);
      if (!all_of.is_array()) throw schema_violation(cpath + ".all_of", "expected an array");
      std::vector<literal> clause;
      for (std::size_t l = 0; l < all_of.size(); ++l) {
        const auto lpath = cpath + ".all_of[" + std::to_string(l) + "]";
        const auto& lit = all_of[l];
        if (!lit.is_object()) throw schema_violation(lpath, "expected an object");
        only_keys(lit, {"template", "token", "negated"}, lpath);
        bool negated = false;
        if (lit.contains("negated")) {
          if (!lit["negated"].is_boolean()) throw schema_violation(lpath + ".negated", "expected a boolean");
          negated = lit["negated"].get<bool>();
        }
        clause.push_back({string_at(lit, "template", lpath), string_at(lit, "token", lpath), negated});
      }
      parsed.clauses.push_back(std::move(clause));
    }
    cb.event_types[name] = std::move(parsed);
  }
  cb.validate();
  return cb;
}

json export_codebook(const codebook& cb) {
  json templates = json::object();
  for (const auto& [id, t] : cb.templates) templates[id] = {{"text", t.text}};
  json types = json::object();
  for (const auto& [name, r] : cb.event_types) {
    json any_of = json::array();
    for (const auto& clause : r.clauses) {
      json all_of = json::array();
      for (const auto& lit : clause)
        all_of.push_back({{"template", lit.template_id}, {"token", lit.token}, {"negated", lit.negated}});
      any_of.push_back({{"all_of", all_of}});
    }
    types[name] = {{"any_of", any_of}};
  }
  return {{"name", cb.name}, {"version", cb.version}, {"templates", templates}, {"event_types", types}};
}

codebook load_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open codebook " + path.string());
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw parse_error(path.string() + " is not valid JSON");
  return import_codebook(doc);
}

void save_codebook(const codebook& cb, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path.string());
  out << export_codebook(cb).dump(2) << '\n';
}

//
// validation sessions

validation_session::validation_session(std::string id, std::string codebook_name,
                                       std::set<std::string> classes)
    : id_(std::move(id)), codebook_(std::move(codebook_name)), classes_(std::move(classes)) {}

bool validation_session::contains(std::string_view event_id) const {
  for (const auto& e : labeled_)
    if (e.event_id == event_id) return true;
  return false;
}

std::map<std::string, double> validation_session::record_feedback(labeled_event entry) {
  if (contains(entry.event_id))
    throw duplicate_event("event '" + entry.event_id + "' already has feedback");
  if (entry.timestamp.empty()) entry.timestamp = utc_timestamp();
  labeled_.push_back(std::move(entry));
  return per_class_accuracy();
}

std::set<std::string> validation_session::classes() const {
  auto out = classes_;
  for (const auto& e : labeled_) {
    out.insert(e.suggested.begin(), e.suggested.end());
    out.insert(e.accepted.begin(), e.accepted.end());
  }
  return out;
}

std::map<std::string, double> validation_session::per_class_accuracy() const {
  std::map<std::string, double> out;
  if (labeled_.empty()) return out;
  for (const auto& c : classes()) {
    std::size_t agree = 0;
    for (const auto& e : labeled_)
      if ((e.suggested.count(c) != 0) == (e.accepted.count(c) != 0)) ++agree;
    out[c] = static_cast<double>(agree) / static_cast<double>(labeled_.size());
  }
  return out;
}

std::set<std::string> validation_session::manual_additions(const labeled_event& e) {
  std::set<std::string> out;
  for (const auto& c : e.accepted)
    if (!e.suggested.count(c)) out.insert(c);
  return out;
}

namespace {

json entry_json(const labeled_event& e) {
  return {{"event_id", e.event_id}, {"description", e.description}, {"suggested", e.suggested},
          {"accepted", e.accepted}, {"timestamp", e.timestamp}};
}

} // namespace

json validation_session::to_json() const {
  json entries = json::array();
  for (const auto& e : labeled_) entries.push_back(entry_json(e));
  return {{"id", id_},         {"codebook", codebook_}, {"classes", classes_},
          {"cursor", cursor},  {"seed", seed},          {"labeled", entries}};
}

validation_session validation_session::from_json(const json& j) {
  validation_session s(j.at("id").get<std::string>(), j.at("codebook").get<std::string>(),
                       j.at("classes").get<std::set<std::string>>());
  s.cursor = j.value("cursor", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
  for (const auto& e : j.at("labeled"))
    s.labeled_.push_back({e.at("event_id").get<std::string>(), e.value("description", ""),
                          e.at("suggested").get<std::set<std::string>>(),
                          e.at("accepted").get<std::set<std::string>>(), e.value("timestamp", "")});
  return s;
}

std::string validation_session::export_jsonl() const {
  std::string out;
  for (const auto& e : labeled_) out += entry_json(e).dump() + "\n";
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace prent
