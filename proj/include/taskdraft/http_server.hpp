#pragma once

// HTTP transport for a Session (cpp-httplib underneath).

#include <memory>
#include <string>

#include "taskdraft/session.hpp"

namespace taskdraft::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
};

class HttpServer {
 public:
  HttpServer(Session& session, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws Error("bind-failed").
  int bind();
  /// Serves until stop(). Call bind() first.
  void listen();
  /// Blocks until listen() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace taskdraft::service
