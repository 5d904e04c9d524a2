#pragma once

#include "prent/codebook.hpp"
#include "prent/corpus.hpp"
#include "prent/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace prent {

struct service_options {
  /// codebooks/ and sessions/ are persisted here; nothing is written when unset
  std::optional<std::filesystem::path> data_dir;
  /// read-only codebook directories loaded at start-up (data_dir wins on clashes)
  std::vector<std::filesystem::path> codebook_dirs;
  /// corpora addressable as corpus_ref
  std::map<std::string, std::filesystem::path> corpora;
  pipeline_config pipeline;
  /// templates served by POST /prent when template_ids is absent
  std::vector<prompt_template> default_templates;
};

struct http_response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

/// State and route logic of the HTTP API, independent of any socket layer.
/// Thread-safe: reads run concurrently, writes are serialized per session and
/// per codebook name.
class service {
public:
  using backend_loader = std::function<backends()>;

  /// The loader runs on first use; a throwing loader makes model routes answer 503.
  service(service_options options, backend_loader loader);

  http_response handle(std::string_view method, std::string_view path, std::string_view body);

  std::vector<std::string> codebook_names() const;

private:
  struct session_slot {
    std::mutex lock;
    validation_session state;
    /// suggestions handed out by /sample and not yet reviewed
    std::map<std::string, std::set<std::string>> pending;
  };

  backends models();
  const std::vector<event_record>& corpus(const std::string& name);
  codebook find_codebook(const std::string& name) const;
  pipeline_config request_config(const nlohmann::json& req) const;
  std::set<std::string> suggest(const codebook& cb, const std::string& text, const pipeline_config& cfg);
  session_slot* find_session(const std::string& id);
  void persist(const codebook& cb);
  void persist(const validation_session& s);

  nlohmann::json post_prent(const nlohmann::json& req);
  nlohmann::json post_code(const nlohmann::json& req);
  nlohmann::json get_codebook(const std::string& name) const;
  nlohmann::json put_codebook(const std::string& name, const nlohmann::json& doc);
  nlohmann::json post_sample(const std::string& id, const nlohmann::json& req);
  nlohmann::json post_feedback(const std::string& id, const nlohmann::json& req);
  nlohmann::json get_session_export(const std::string& id);

  service_options options_;
  backend_loader loader_;

  std::mutex models_lock_;
  std::optional<backends> models_;

  mutable std::shared_mutex state_lock_;
  std::map<std::string, codebook> codebooks_;
  std::map<std::string, std::unique_ptr<std::mutex>> codebook_locks_;
  std::map<std::string, std::unique_ptr<session_slot>> sessions_;

  std::mutex corpora_lock_;
  std::map<std::string, std::vector<event_record>> corpora_;
};

/// HTTP transport for a service.
class http_server {
public:
  explicit http_server(service& svc);
  ~http_server();
  http_server(const http_server&) = delete;
  http_server& operator=(const http_server&) = delete;

  /// Binds host:port; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves on the bound socket until stop() is called.
  void run();
  /// blocks until run() accepts connections
  void wait_until_ready() const;
  /// Safe to call from any thread.
  void stop();

private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

/// Blocks serving `svc` on host:port until the process is stopped.
/// Returns false when the socket cannot be bound.
bool serve_http(service& svc, const std::string& host, int port);

} // namespace prent
