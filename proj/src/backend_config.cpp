#include "prent/backend_config.hpp"

#include "prent/checkpoint_backends.hpp"
#include "prent/error.hpp"
#include "prent/mock_backends.hpp"
#include "prent/text.hpp"

#include <cstdlib>
#include <fstream>
#include <map>

namespace prent {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::string>& hub_aliases() {
  static const std::map<std::string, std::string> aliases{
      {"distilbert-base-uncased", "distilbert/distilbert-base-uncased"},
      {"roberta-large-mnli", "FacebookAI/roberta-large-mnli"},
      {"roberta-base", "FacebookAI/roberta-base"},
      {"bert-base-uncased", "google-bert/bert-base-uncased"},
  };
  return aliases;
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

bool is_checkpoint_dir(const fs::path& p) {
  std::error_code ec;
  return fs::is_directory(p, ec) && fs::exists(p / "config.json", ec);
}

std::vector<fs::path> hub_caches() {
  std::vector<fs::path> out;
  if (auto v = env("HF_HUB_CACHE")) out.emplace_back(*v);
  if (auto v = env("HUGGINGFACE_HUB_CACHE")) out.emplace_back(*v);
  if (auto v = env("HF_HOME")) out.push_back(fs::path(*v) / "hub");
  if (auto v = env("HOME")) out.push_back(fs::path(*v) / ".cache" / "huggingface" / "hub");
  return out;
}

std::optional<fs::path> find_in_hub(const fs::path& cache, const std::string& repo) {
  const auto dir = cache / ("models--" + text::replace_all(repo, "/", "--"));
  std::error_code ec;
  // prefer the revision refs/main points at
  if (std::ifstream ref(dir / "refs" / "main"); ref) {
    std::string rev;
    std::getline(ref, rev);
    if (is_checkpoint_dir(dir / "snapshots" / text::trim(rev))) return dir / "snapshots" / text::trim(rev);
  }
  if (!fs::is_directory(dir / "snapshots", ec)) return std::nullopt;
  std::vector<fs::path> snaps;
  for (const auto& e : fs::directory_iterator(dir / "snapshots", ec))
    if (is_checkpoint_dir(e.path())) snaps.push_back(e.path());
  if (snaps.empty()) return std::nullopt;
  std::sort(snaps.begin(), snaps.end());
  return snaps.front();
}

} // namespace

backend_config backend_config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw schema_violation("$", "backend config must be an object");
  backend_config c;
  auto str = [&](const char* key, std::string& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw schema_violation(std::string("$.") + key, "expected a string");
    out = j[key].get<std::string>();
  };
  std::string kind = "checkpoint";
  str("backend", kind);
  if (kind == "mock")
    c.kind = backend_kind::mock;
  else if (kind != "checkpoint")
    throw schema_violation("$.backend", "expected \"checkpoint\" or \"mock\"");
  str("fill_model", c.fill_model_id);
  str("nli_model", c.nli_model_id);
  str("qa_model", c.qa_model_id);
  str("device", c.device);
  if (j.contains("max_seq_len")) {
    if (!j["max_seq_len"].is_number_unsigned()) throw schema_violation("$.max_seq_len", "expected a positive integer");
    c.max_seq_len = j["max_seq_len"].get<std::size_t>();
  }
  if (j.contains("mock_fixtures")) {
    const auto& f = j["mock_fixtures"];
    if (f.is_string()) {
      c.mock_fixtures.emplace_back(f.get<std::string>());
    } else if (f.is_array()) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i].is_string())
          throw schema_violation("$.mock_fixtures[" + std::to_string(i) + "]", "expected a path");
        c.mock_fixtures.emplace_back(f[i].get<std::string>());
      }
    } else {
      throw schema_violation("$.mock_fixtures", "expected a path or a list of paths");
    }
  }
  if (j.contains("model_root")) {
    std::string root;
    str("model_root", root);
    c.model_root = root;
  }
  return c;
}

nlohmann::json backend_config::to_json() const {
  nlohmann::json j{{"backend", kind == backend_kind::mock ? "mock" : "checkpoint"},
                   {"fill_model", fill_model_id},
                   {"nli_model", nli_model_id},
                   {"qa_model", qa_model_id},
                   {"device", device},
                   {"max_seq_len", max_seq_len}};
  j["mock_fixtures"] = nlohmann::json::array();
  for (const auto& p : mock_fixtures) j["mock_fixtures"].push_back(p.string());
  if (model_root) j["model_root"] = model_root->string();
  return j;
}

void backend_config::apply_environment() {
  if (auto v = env("PRENT_BACKEND")) {
    if (*v == "mock")
      kind = backend_kind::mock;
    else if (*v == "checkpoint")
      kind = backend_kind::checkpoint;
    else
      throw schema_violation("PRENT_BACKEND", "expected checkpoint or mock");
  }
  if (auto v = env("PRENT_FILL_MODEL")) fill_model_id = *v;
  if (auto v = env("PRENT_NLI_MODEL")) nli_model_id = *v;
  if (auto v = env("PRENT_QA_MODEL")) qa_model_id = *v;
  if (auto v = env("PRENT_DEVICE")) device = *v;
  if (auto v = env("PRENT_MAX_SEQ_LEN")) {
    try {
      max_seq_len = static_cast<std::size_t>(std::stoul(*v));
    } catch (const std::exception&) {
      throw schema_violation("PRENT_MAX_SEQ_LEN", "expected a positive integer");
    }
  }
  if (auto v = env("PRENT_MOCK_FIXTURES")) {
    mock_fixtures.clear();
    for (const auto& p : text::split(*v, ':'))
      if (!p.empty()) mock_fixtures.emplace_back(p);
  }
  if (auto v = env("PRENT_MODEL_ROOT")) model_root = *v;
}

backend_config backend_config::load(const std::optional<fs::path>& file) {
  backend_config c;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw error("cannot open backend config " + file->string());
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw parse_error("backend config " + file->string() + " is not valid JSON");
    c = from_json(j);
    // relative fixture paths are relative to the config file
    for (auto& p : c.mock_fixtures)
      if (p.is_relative()) p = file->parent_path() / p;
  }
  c.apply_environment();
  c.validate();
  return c;
}

void backend_config::validate() const {
  if (fill_model_id.empty()) throw schema_violation("$.fill_model", "identifier must be non-empty");
  if (nli_model_id.empty()) throw schema_violation("$.nli_model", "identifier must be non-empty");
  if (qa_model_id.empty()) throw schema_violation("$.qa_model", "identifier must be non-empty");
  if (max_seq_len < 8) throw schema_violation("$.max_seq_len", "must be at least 8");
  if (device != "cpu" && device != "auto")
    throw schema_violation("$.device", "only \"cpu\" and \"auto\" are supported");
  if (kind == backend_kind::mock && mock_fixtures.empty())
    throw schema_violation("$.mock_fixtures", "the mock backend needs at least one fixture file");
}

std::optional<fs::path> find_checkpoint(const std::string& id,
                                        const std::optional<fs::path>& model_root) {
  if (is_checkpoint_dir(id)) return fs::path(id);
  std::vector<std::string> names{id};
  if (auto it = hub_aliases().find(id); it != hub_aliases().end()) names.push_back(it->second);
  if (model_root) {
    for (const auto& n : names) {
      if (is_checkpoint_dir(*model_root / n)) return *model_root / n;
      const auto flat = *model_root / text::replace_all(n, "/", "--");
      if (is_checkpoint_dir(flat)) return flat;
    }
  }
  for (const auto& cache : hub_caches())
    for (const auto& n : names)
      if (auto p = find_in_hub(cache, n)) return p;
  return std::nullopt;
}

backends make_backends(const backend_config& config, unsigned needed) {
  config.validate();
  backends b;
  if (config.kind == backend_kind::mock) {
    auto fixtures = std::make_shared<const mock_fixtures>(mock_fixtures::load(config.mock_fixtures));
    b = make_mock_backends(fixtures);
    if (!(needed & need_fill)) b.fill.reset();
    if (!(needed & need_nli)) b.nli.reset();
    if (!(needed & need_qa)) b.qa.reset();
    return b;
  }
  auto locate = [&](const std::string& id) {
    auto dir = find_checkpoint(id, config.model_root);
    if (!dir)
      throw backend_unavailable("checkpoint '" + id +
                                "' not found (set PRENT_MODEL_ROOT or populate the Hugging Face cache)");
    return *dir;
  };
  auto opts = [&](const std::string& id) { return checkpoint_options{config.max_seq_len, id}; };
  if (needed & need_fill) b.fill = load_checkpoint_filler(locate(config.fill_model_id), opts(config.fill_model_id));
  if (needed & need_nli) b.nli = load_checkpoint_nli(locate(config.nli_model_id), opts(config.nli_model_id));
  if (needed & need_qa) b.qa = load_checkpoint_qa(locate(config.qa_model_id), opts(config.qa_model_id));
  return b;
}

} // namespace prent
