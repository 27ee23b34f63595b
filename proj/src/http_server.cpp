#include "densepix/http_server.hpp"

#include <httplib.h>

#include "densepix/error.hpp"

namespace densepix {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession: return 404;
    case ErrorCode::kOutOfRange:
    case ErrorCode::kInvalidArgument: return 400;
    default: return 422;
  }
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, status);
}

// Runs a handler, mapping engine and JSON errors onto structured responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, http_status(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "bad_request", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

// Attaches a stale-revision warning when the client echoes an older revision.
void tag_revision(json& body, std::optional<std::uint64_t> client, std::uint64_t current) {
  if (client && *client < current) {
    body["warning"] = "stale revision " + std::to_string(*client) + "; current is " +
                      std::to_string(current);
  }
}

std::optional<std::uint64_t> query_revision(const httplib::Request& req) {
  if (!req.has_param("revision")) return std::nullopt;
  try {
    return std::stoull(req.get_param_value("revision"));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "revision must be an integer");
  }
}

std::pair<std::size_t, std::size_t> index_range(const json& value, const char* name) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_unsigned() ||
      !value[1].is_number_unsigned()) {
    throw Error(ErrorCode::kOutOfRange,
                std::string(name) + " must be a pair of non-negative integers");
  }
  return {value[0].get<std::size_t>(), value[1].get<std::size_t>()};
}

Brush brush_from_json(const json& body, const Session& session) {
  Brush brush;
  const std::size_t rows = session.dataset().regions.size();
  const std::size_t cols = session.dataset().series.cols();
  auto [r0, r1] = body.contains("rows") ? index_range(body["rows"], "rows")
                                        : std::pair<std::size_t, std::size_t>{0, rows - 1};
  auto [t0, t1] = body.contains("times") ? index_range(body["times"], "times")
                                         : std::pair<std::size_t, std::size_t>{0, cols - 1};
  brush.row_first = r0;
  brush.row_last = r1;
  brush.time_first = t0;
  brush.time_last = t1;
  brush.stat = parse_stat(body.value("stat", "mean"));
  return brush;
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<SessionStore> store)
    : store_(std::move(store)), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& srv = *server_;

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      SessionStore::CreateRequest create;
      const json& geo = body.at("geojson");
      create.geojson = geo.is_string() ? geo.get<std::string>() : geo.dump();
      create.csv = body.at("csv").get<std::string>();
      if (body.contains("contiguity")) {
        create.rule = parse_contiguity(body["contiguity"].get<std::string>());
      }
      if (body.contains("id_property")) create.id_property = body["id_property"].get<std::string>();
      if (body.contains("alpha")) create.alpha = body["alpha"].get<double>();
      if (body.contains("project_lonlat")) create.project_lonlat = body["project_lonlat"].get<bool>();
      const std::string id = store_->create(create);
      json out = store_->get(id)->params_json();
      out["id"] = id;
      send_json(res, out, 201);
    });
  });

  srv.Patch(R"(/sessions/([^/]+)/params)",
            [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = store_->get(req.matches[1]);
      const json body = parse_body(req);
      std::optional<std::uint64_t> client;
      if (body.contains("revision")) client = body["revision"].get<std::uint64_t>();
      const std::uint64_t before = session->revision();
      ParamUpdate update;
      if (body.contains("alpha")) {
        if (!body["alpha"].is_number()) throw Error(ErrorCode::kOutOfRange, "alpha must be a number");
        update.alpha = body["alpha"].get<double>();
      }
      if (body.contains("beta")) {
        if (!body["beta"].is_number_integer()) {
          throw Error(ErrorCode::kOutOfRange, "beta must be an integer");
        }
        update.beta = body["beta"].get<int>();
      }
      if (body.contains("extent")) {
        if (body["extent"].is_null()) {
          update.extent = std::optional<TemporalExtent>{};
        } else {
          auto [s, e] = index_range(body["extent"], "extent");
          update.extent = std::optional<TemporalExtent>{TemporalExtent{s, e}};
        }
      }
      json out = session->set_params(update);
      tag_revision(out, client, before);
      send_json(res, out);
    });
  });

  auto view = [this](const char* pattern, auto&& render) {
    server_->Get(pattern, [this, render](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto session = store_->get(req.matches[1]);
        json out = render(*session, req);
        tag_revision(out, query_revision(req), out.value("revision", std::uint64_t{0}));
        send_json(res, out);
      });
    });
  };
  view(R"(/sessions/([^/]+)/params)",
       [](const Session& s, const httplib::Request&) { return s.params_json(); });
  view(R"(/sessions/([^/]+)/ordering)",
       [](const Session& s, const httplib::Request&) { return s.ordering_json(); });
  view(R"(/sessions/([^/]+)/quality)",
       [](const Session& s, const httplib::Request&) { return s.quality_json(); });
  view(R"(/sessions/([^/]+)/layout)", [](const Session& s, const httplib::Request& req) {
    return s.layout_json(req.has_param("resolve_colors") &&
                         req.get_param_value("resolve_colors") != "0");
  });
  view(R"(/sessions/([^/]+)/path)",
       [](const Session& s, const httplib::Request&) { return s.path_json(); });
  view(R"(/sessions/([^/]+)/status)",
       [](const Session& s, const httplib::Request&) { return s.status_json(); });

  srv.Get(R"(/sessions/([^/]+)/svg)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = store_->get(req.matches[1]);
      const bool path = req.has_param("path") && req.get_param_value("path") != "0";
      std::optional<Brush> brush;
      if (req.has_param("rows") || req.has_param("times") || req.has_param("stat")) {
        json q = json::object();
        auto pair = [&](const char* key) {
          const std::string text = req.get_param_value(key);
          const auto comma = text.find(',');
          try {
            if (comma == std::string::npos) throw std::invalid_argument(text);
            q[key] = {std::stoull(text.substr(0, comma)), std::stoull(text.substr(comma + 1))};
          } catch (const std::exception&) {
            throw Error(ErrorCode::kOutOfRange, std::string(key) + " must look like FIRST,LAST");
          }
        };
        if (req.has_param("rows")) pair("rows");
        if (req.has_param("times")) pair("times");
        if (req.has_param("stat")) q["stat"] = req.get_param_value("stat");
        brush = brush_from_json(q, *session);
      }
      res.set_content(session->render_svg(brush, path), "image/svg+xml");
    });
  });

  srv.Post(R"(/sessions/([^/]+)/selection)",
           [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = store_->get(req.matches[1]);
      const json body = req.body.empty() ? json::object() : parse_body(req);
      json out = session->selection_json(brush_from_json(body, *session));
      std::optional<std::uint64_t> client;
      if (body.contains("revision")) client = body["revision"].get<std::uint64_t>();
      tag_revision(out, client, out["revision"].get<std::uint64_t>());
      send_json(res, out);
    });
  });

  srv.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!store_->erase(req.matches[1])) {
        throw Error(ErrorCode::kUnknownSession, "unknown session '" + std::string(req.matches[1]) + "'");
      }
      send_json(res, {{"deleted", std::string(req.matches[1])}});
    });
  });
}

HttpServer::~HttpServer() = default;

bool HttpServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace densepix
