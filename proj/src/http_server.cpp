#include "taskdraft/http_server.hpp"

#include <httplib.h>

#include "taskdraft/error.hpp"

namespace taskdraft::service {

struct HttpServer::Impl {
  Session& session;
  ServerOptions options;
  httplib::Server server;

  Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)) {}

  void cors(httplib::Response& res) const {
    res.set_header("Access-Control-Allow-Origin", options.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  }

  void forward(const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    Response out = session.handle(r);
    res.status = out.status;
    cors(res);
    res.set_content(out.body.dump() + "\n", "application/json");
  }
};

HttpServer::HttpServer(Session& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->forward(req, res); };
  impl_->server.Get(R"(/.*)", handler);
  impl_->server.Post(R"(/.*)", handler);
  impl_->server.Options(R"(/.*)", [this](const httplib::Request&, httplib::Response& res) {
    impl_->cors(res);
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& o = impl_->options;
  int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host) : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (port < 0) throw Error("bind-failed", o.host + ":" + std::to_string(o.port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace taskdraft::service
