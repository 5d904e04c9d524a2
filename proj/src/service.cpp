#include "prent/service.hpp"

#include "prent/error.hpp"
#include "prent/random.hpp"
#include "prent/text.hpp"

#include <fstream>
#include <regex>

namespace prent {

using nlohmann::json;

namespace {

struct http_error : std::runtime_error {
  http_error(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

[[noreturn]] void not_found(const std::string& what) { throw http_error(404, what); }
[[noreturn]] void bad_request(const std::string& what) { throw http_error(400, what); }

void check_name(const std::string& name, const char* kind) {
  static const std::regex ok("[A-Za-z0-9][A-Za-z0-9_.-]{0,127}");
  if (!std::regex_match(name, ok)) bad_request(std::string("invalid ") + kind + " name '" + name + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

template <typename T>
T field(const json& req, const char* key, T fallback) {
  if (!req.contains(key)) return fallback;
  try {
    return req.at(key).get<T>();
  } catch (const json::exception&) {
    bad_request(std::string("field '") + key + "' has the wrong type");
  }
}

json candidates_json(const template_outcome& o, double threshold) {
  json j = json::object();
  if (o.error) {
    j["error"] = *o.error;
    return j;
  }
  json cands = json::array();
  for (const auto& c : o.scored->scored)
    cands.push_back({{"token", c.token},
                     {"fill_p", c.fill_probability},
                     {"entail_p", c.entail_probability},
                     {"entailed", c.entail_probability >= threshold}});
  j["candidates"] = std::move(cands);
  j["entailed"] = o.entailed->tokens();
  return j;
}

} // namespace

service::service(service_options options, backend_loader loader)
    : options_(std::move(options)), loader_(std::move(loader)) {
  options_.pipeline.validate();
  auto load_dir = [&](const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) return;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto cb = load_codebook(f);
      codebooks_[cb.name] = std::move(cb);
    }
  };
  for (const auto& d : options_.codebook_dirs) load_dir(d);
  if (options_.data_dir) {
    load_dir(*options_.data_dir / "codebooks");
    const auto sessions = *options_.data_dir / "sessions";
    if (std::filesystem::is_directory(sessions)) {
      for (const auto& e : std::filesystem::directory_iterator(sessions)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        auto slot = std::make_unique<session_slot>();
        slot->state = validation_session::from_json(json::parse(in));
        sessions_[slot->state.id()] = std::move(slot);
      }
    }
  }
  for (const auto& [name, cb] : codebooks_) codebook_locks_[name] = std::make_unique<std::mutex>();
}

std::vector<std::string> service::codebook_names() const {
  std::shared_lock lock(state_lock_);
  std::vector<std::string> out;
  for (const auto& [name, cb] : codebooks_) out.push_back(name);
  return out;
}

backends service::models() {
  std::lock_guard lock(models_lock_);
  if (!models_) {
    if (!loader_) throw backend_unavailable("no model backends configured");
    models_ = loader_();
  }
  return *models_;
}

const std::vector<event_record>& service::corpus(const std::string& name) {
  std::lock_guard lock(corpora_lock_);
  if (auto it = corpora_.find(name); it != corpora_.end()) return it->second;
  auto path = options_.corpora.find(name);
  if (path == options_.corpora.end()) not_found("unknown corpus '" + name + "'");
  return corpora_[name] = read_corpus(path->second);
}

codebook service::find_codebook(const std::string& name) const {
  std::shared_lock lock(state_lock_);
  auto it = codebooks_.find(name);
  if (it == codebooks_.end()) not_found("unknown codebook '" + name + "'");
  return it->second;
}

pipeline_config service::request_config(const json& req) const {
  auto cfg = options_.pipeline;
  cfg.top_k = field<std::size_t>(req, "top_k", cfg.top_k);
  cfg.entail_threshold = field<double>(req, "threshold", cfg.entail_threshold);
  cfg.validate();
  return cfg;
}

std::set<std::string> service::suggest(const codebook& cb, const std::string& text, const pipeline_config& cfg) {
  return code_event(models(), event_description(text), cb, cfg);
}

service::session_slot* service::find_session(const std::string& id) {
  std::shared_lock lock(state_lock_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

void service::persist(const codebook& cb) {
  if (options_.data_dir)
    write_atomically(*options_.data_dir / "codebooks" / (cb.name + ".json"), export_codebook(cb).dump(2) + "\n");
}

void service::persist(const validation_session& s) {
  if (options_.data_dir)
    write_atomically(*options_.data_dir / "sessions" / (s.id() + ".json"), s.to_json().dump(2) + "\n");
}

//
// routes

json service::post_prent(const json& req) {
  const auto text = field<std::string>(req, "text", "");
  const event_description event(text);
  const auto cfg = request_config(req);

  std::vector<prompt_template> templates;
  if (req.contains("templates")) {
    if (!req["templates"].is_array()) bad_request("'templates' must be an array");
    for (const auto& t : req["templates"])
      templates.push_back({field<std::string>(t, "id", ""), field<std::string>(t, "text", "")});
  } else {
    std::map<std::string, prompt_template> known;
    for (const auto& t : options_.default_templates) known.emplace(t.id, t);
    {
      std::shared_lock lock(state_lock_);
      for (const auto& [name, cb] : codebooks_)
        for (const auto& [id, t] : cb.templates) known.emplace(id, t);
    }
    if (req.contains("template_ids")) {
      for (const auto& id : field<std::vector<std::string>>(req, "template_ids", {})) {
        auto it = known.find(id);
        if (it == known.end()) bad_request("unknown template '" + id + "'");
        templates.push_back(it->second);
      }
    } else {
      templates = options_.default_templates;
    }
  }
  for (const auto& t : templates) validate_template(t);

  const auto result = pr_ent(models(), event, templates, cfg);
  json out{{"text", event.text()}, {"top_k", cfg.top_k}, {"threshold", cfg.entail_threshold}};
  json per = json::object();
  std::size_t backend_failures = 0;
  std::string last_failure;
  for (const auto& [id, o] : result) {
    per[id] = candidates_json(o, cfg.entail_threshold);
    if (o.failure) {
      try {
        std::rethrow_exception(o.failure);
      } catch (const backend_error& e) {
        ++backend_failures;
        last_failure = e.what();
      } catch (...) {
      }
    }
  }
  if (backend_failures == result.size()) throw backend_unavailable(last_failure);
  out["templates"] = std::move(per);
  return out;
}

json service::post_code(const json& req) {
  codebook cb;
  if (!req.contains("codebook")) bad_request("'codebook' is required");
  if (req["codebook"].is_string())
    cb = find_codebook(req["codebook"].get<std::string>());
  else
    cb = import_codebook(req["codebook"]);
  const auto cfg = request_config(req);

  if (req.contains("text")) {
    const auto text = field<std::string>(req, "text", "");
    const event_description event(text);
    return {{"codebook", cb.name}, {"types", suggest(cb, event.text(), cfg)}};
  }
  if (!req.contains("corpus_ref")) bad_request("one of 'text' or 'corpus_ref' is required");
  const auto& records = corpus(field<std::string>(req, "corpus_ref", ""));
  json results = json::array();
  for (const auto& r : records) results.push_back(coded_json(r, suggest(cb, r.description, cfg)));
  return {{"codebook", cb.name}, {"results", std::move(results)}};
}

json service::get_codebook(const std::string& name) const { return export_codebook(find_codebook(name)); }

json service::put_codebook(const std::string& name, const json& doc) {
  check_name(name, "codebook");
  json body = doc;
  if (body.is_object() && !body.contains("name")) body["name"] = name;
  auto cb = import_codebook(body);
  if (cb.name != name) bad_request("codebook name '" + cb.name + "' does not match the path");

  std::mutex* lock;
  {
    std::unique_lock guard(state_lock_);
    auto& slot = codebook_locks_[name];
    if (!slot) slot = std::make_unique<std::mutex>();
    lock = slot.get();
  }
  std::lock_guard writer(*lock);
  persist(cb);
  {
    std::unique_lock guard(state_lock_);
    codebooks_[name] = cb;
  }
  return export_codebook(cb);
}

json service::post_sample(const std::string& id, const json& req) {
  check_name(id, "session");
  const auto n = field<std::size_t>(req, "n", 5);
  auto* slot = find_session(id);
  if (!slot) {
    // a sample request naming a codebook opens the session
    if (!req.contains("codebook")) not_found("unknown session '" + id + "'");
    const auto cb = find_codebook(field<std::string>(req, "codebook", ""));
    std::set<std::string> classes;
    for (const auto& [type, r] : cb.event_types) classes.insert(type);
    std::unique_lock guard(state_lock_);
    auto& s = sessions_[id];
    if (!s) {
      s = std::make_unique<session_slot>();
      s->state = validation_session(id, cb.name, classes);
      s->state.seed = field<std::uint64_t>(req, "seed", fnv1a(id));
    }
    slot = s.get();
  }

  std::lock_guard writer(slot->lock);
  auto& st = slot->state;
  const auto cb = find_codebook(st.codebook_name());
  const auto corpus_name = field<std::string>(req, "corpus_ref", options_.corpora.empty() ? "" : options_.corpora.begin()->first);
  const auto& records = corpus(corpus_name);

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!st.contains(records[i].id)) open.push_back(i);
  random::engine rng(st.seed + 0x9e3779b97f4a7c15ULL * (st.cursor + 1));
  const auto picks = random::sample_without_replacement(open.size(), n, rng);
  ++st.cursor;

  const auto cfg = request_config(req);
  json events = json::array();
  for (auto p : picks) {
    const auto& r = records[open[p]];
    auto types = suggest(cb, r.description, cfg);
    events.push_back({{"event_id", r.id}, {"text", r.description}, {"suggested", types}});
    slot->pending[r.id] = std::move(types);
  }
  persist(st);
  return {{"session", id}, {"codebook", cb.name}, {"events", std::move(events)}, {"remaining", open.size() - picks.size()}};
}

json service::post_feedback(const std::string& id, const json& req) {
  auto* slot = find_session(id);
  if (!slot) not_found("unknown session '" + id + "'");
  const auto event_id = field<std::string>(req, "event_id", "");
  if (event_id.empty()) bad_request("'event_id' is required");
  if (!req.contains("accepted") || !req["accepted"].is_array()) bad_request("'accepted' must be an array");
  const auto accepted = field<std::set<std::string>>(req, "accepted", {});

  std::lock_guard writer(slot->lock);
  auto& st = slot->state;
  if (st.contains(event_id)) throw duplicate_event("event '" + event_id + "' already has feedback");

  labeled_event entry{event_id, "", {}, accepted, ""};
  const event_record* record = nullptr;
  for (const auto& [name, path] : options_.corpora)
    if ((record = find_record(corpus(name), event_id))) break;
  if (record) entry.description = record->description;
  if (req.contains("suggested")) {
    entry.suggested = field<std::set<std::string>>(req, "suggested", {});
  } else if (auto it = slot->pending.find(event_id); it != slot->pending.end()) {
    entry.suggested = it->second;
  } else {
    if (!record) not_found("unknown event '" + event_id + "'");
    entry.suggested = suggest(find_codebook(st.codebook_name()), record->description, options_.pipeline);
  }

  const auto accuracy = st.record_feedback(std::move(entry));
  slot->pending.erase(event_id);
  persist(st);
  return {{"session", id}, {"labeled", st.labeled().size()}, {"per_class_accuracy", accuracy}};
}

json service::get_session_export(const std::string& id) {
  auto* slot = find_session(id);
  if (!slot) not_found("unknown session '" + id + "'");
  std::lock_guard reader(slot->lock);
  const auto& st = slot->state;
  json events = json::array();
  for (const auto& e : st.labeled())
    events.push_back({{"event_id", e.event_id},
                      {"description", e.description},
                      {"suggested", e.suggested},
                      {"accepted", e.accepted},
                      {"timestamp", e.timestamp}});
  return {{"session", id},
          {"codebook", st.codebook_name()},
          {"per_class_accuracy", st.per_class_accuracy()},
          {"events", std::move(events)}};
}

http_response service::handle(std::string_view method, std::string_view path, std::string_view body) {
  auto reply = [](int status, const json& j) { return http_response{status, j.dump(), "application/json", {}}; };
  try {
    auto parts = text::split(std::string(text::trim(path)), '/');
    std::erase(parts, std::string());
    const std::string m(method);

    auto parse_body = [&]() -> json {
      if (text::trim(body).empty()) return json::object();
      json j;
      try {
        j = json::parse(body);
      } catch (const json::exception& e) {
        bad_request(std::string("malformed JSON: ") + e.what());
      }
      if (!j.is_object()) bad_request("request body must be a JSON object");
      return j;
    };
    auto route = [&](std::initializer_list<const char*> shape, const char* verb) {
      if (parts.size() != shape.size()) return false;
      std::size_t i = 0;
      for (const char* s : shape) {
        if (*s != '{' && parts[i] != s) return false;
        ++i;
      }
      if (m != verb) throw http_error(405, "method " + m + " not allowed on " + std::string(path));
      return true;
    };

    if (route({"prent"}, "POST")) return reply(200, post_prent(parse_body()));
    if (route({"code"}, "POST")) return reply(200, post_code(parse_body()));
    if (parts.size() == 2 && parts[0] == "codebooks") {
      if (m == "GET") return reply(200, get_codebook(parts[1]));
      if (m == "PUT") {
        json doc;
        try {
          doc = json::parse(body);
        } catch (const json::exception& e) {
          bad_request(std::string("malformed JSON: ") + e.what());
        }
        return reply(200, put_codebook(parts[1], doc));
      }
      throw http_error(405, "method " + m + " not allowed on " + std::string(path));
    }
    if (route({"sessions", "{id}", "sample"}, "POST")) return reply(200, post_sample(parts[1], parse_body()));
    if (route({"sessions", "{id}", "feedback"}, "POST")) return reply(200, post_feedback(parts[1], parse_body()));
    if (route({"sessions", "{id}", "export"}, "GET")) return reply(200, get_session_export(parts[1]));
    if (route({"export", "codebook", "{name}"}, "GET")) {
      auto r = reply(200, get_codebook(parts[2]));
      r.body = json::parse(r.body).dump(2) + "\n";
      r.headers["Content-Disposition"] = "attachment; filename=\"" + parts[2] + ".json\"";
      return r;
    }
    if (route({"health"}, "GET")) return reply(200, {{"status", "ok"}});
    throw http_error(404, "no route for " + m + " " + std::string(path));
  } catch (const http_error& e) {
    return reply(e.status, {{"error", e.what()}});
  } catch (const schema_violation& e) {
    return reply(400, {{"error", e.what()}, {"path", e.path()}});
  } catch (const duplicate_event& e) {
    return reply(409, {{"error", e.what()}});
  } catch (const backend_error& e) {
    return reply(503, {{"error", e.what()}});
  } catch (const invalid_event& e) {
    return reply(400, {{"error", e.what()}});
  } catch (const invalid_template& e) {
    return reply(400, {{"error", e.what()}});
  } catch (const invalid_templates& e) {
    return reply(400, {{"error", e.what()}});
  } catch (const std::invalid_argument& e) {
    return reply(400, {{"error", e.what()}});
  } catch (const json::exception& e) {
    return reply(400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    return reply(500, {{"error", e.what()}});
  }
}

} // namespace prent
