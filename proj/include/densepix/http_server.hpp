#pragma once

#include <memory>
#include <string>

#include "densepix/error.hpp"
#include "densepix/session.hpp"

namespace httplib {
class Server;
}

namespace densepix {

/// JSON-over-HTTP front end for a SessionStore.
///
///   POST   /sessions                     create from {geojson, csv, ...}
///   PATCH  /sessions/{id}/params         {alpha?, beta?, extent?, revision?}
///   GET    /sessions/{id}/params|ordering|quality|layout|path|status
///   GET    /sessions/{id}/svg?path=1&rows=A,B&times=A,B&stat=mean
///   POST   /sessions/{id}/selection      {rows: [a, b], times: [a, b], stat}
///   DELETE /sessions/{id}
///
/// Errors come back as {error: {code, message}} with 4xx statuses.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<SessionStore> store);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; call listen_after_bind() next.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  std::shared_ptr<SessionStore> store_;
  std::unique_ptr<httplib::Server> server_;
};

int http_status(ErrorCode code);

}  // namespace densepix
