#include "prent/service.hpp"

#include <httplib.h>

namespace prent {

struct http_server::impl {
  httplib::Server server;
};

http_server::http_server(service& svc) : impl_(std::make_unique<impl>()) {
  auto bridge = [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto r = svc.handle(req.method, req.path, req.body);
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    res.set_content(r.body, r.content_type);
  };
  const char* any = R"(/.*)";
  impl_->server.Get(any, bridge);
  impl_->server.Post(any, bridge);
  impl_->server.Put(any, bridge);
  impl_->server.Delete(any, bridge);
  impl_->server.Patch(any, bridge);
}

http_server::~http_server() = default;

int http_server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void http_server::run() { impl_->server.listen_after_bind(); }

void http_server::wait_until_ready() const { impl_->server.wait_until_ready(); }

void http_server::stop() { impl_->server.stop(); }

bool serve_http(service& svc, const std::string& host, int port) {
  http_server server(svc);
  if (server.bind(host, port) < 0) return false;
  server.run();
  return true;
}

} // namespace prent
