#include "scp/service.hpp"

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <httplib.h>

#include "json_util.hpp"

namespace scp {

using namespace detail;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, const std::string& message, const std::string& field = "") {
  json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  return json_response(status, body);
}

std::optional<std::uint64_t> parse_id(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void on_signal(int) { g_stop_requested = true; }

}  // namespace

Service::Service(SystemDocument doc) : doc_(std::move(doc)) {}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  while (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
  try {
    if (path == "/system") {
      if (method != "GET") return error_response(405, "method not allowed");
      json out = system_to_json(doc_.system);
      if (doc_.constraints) out["constraints"] = constraints_to_json(*doc_.constraints);
      return json_response(200, out);
    }
    if (path == "/status") {
      if (method != "GET") return error_response(405, "method not allowed");
      return status();
    }
    if (path == "/runs") {
      if (method == "GET") return json_response(200, report_to_json(doc_.system, store_.list()));
      if (method == "POST") return post_run(body);
      return error_response(405, "method not allowed");
    }
    constexpr std::string_view prefix = "/runs/";
    if (path.substr(0, prefix.size()) == prefix) {
      auto id = parse_id(path.substr(prefix.size()));
      if (!id) return error_response(400, "run id must be a non-negative integer", "id");
      if (method == "GET") {
        auto r = store_.get(*id);
        if (!r) return error_response(404, "no run " + std::to_string(*id));
        return json_response(200, run_record_to_json(doc_.system, *r));
      }
      if (method == "DELETE") {
        if (!store_.erase(*id)) return error_response(404, "no run " + std::to_string(*id));
        return json_response(200, {{"deleted", *id}});
      }
      return error_response(405, "method not allowed");
    }
    return error_response(404, "no route " + std::string(path));
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

HttpResponse Service::post_run(std::string_view body) {
  ConstraintSet constraints = doc_.constraints.value_or(ConstraintSet{});
  ConfigSet enabled = ConfigSet::all();
  try {
    const json j = body.empty() ? json::object() : parse_json(body);
    if (!j.is_object()) throw SchemaError("", "request body must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "constraints" && it.key() != "enabled_configs") throw SchemaError(it.key(), "unknown field");
    if (j.contains("constraints")) constraints = constraints_from_json(j.at("constraints"), "constraints");
    if (j.contains("enabled_configs")) enabled = config_set_from_json(j.at("enabled_configs"), "enabled_configs");
  } catch (const SchemaError& e) {
    return error_response(400, e.what(), e.field());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  }

  ++active_;
  try {
    RunRecord r = store_.add(run_once(doc_.system, constraints, enabled));
    --active_;
    ++completed_;
    return json_response(201, run_record_to_json(doc_.system, r));
  } catch (const Error& e) {
    --active_;
    return error_response(400, e.what());
  }
}

HttpResponse Service::status() const {
  return json_response(200, {{"active_runs", active_.load()},
                             {"completed_runs", completed_.load()},
                             {"stored_runs", store_.size()}});
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  bool bound = false;
  std::atomic<bool> entered{false};
  std::atomic<bool> finished{false};
  std::atomic<bool> stop_requested{false};

  explicit Impl(Service& s) : service(s) {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      HttpResponse r = service.handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    // Plain SO_REUSEADDR so a second server on a taken port fails to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    const std::string any = R"(/.*)";
    server.Get(any, dispatch);
    server.Post(any, dispatch);
    server.Delete(any, dispatch);
    server.Options(any, [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void HttpServer::listen() {
  if (!impl_->bound) throw Error("listen() before bind()");
  impl_->entered = true;
  if (!impl_->stop_requested) impl_->server.listen_after_bind();
  impl_->finished = true;
}

void HttpServer::wait_until_ready() const {
  while (!impl_->server.is_running() && !impl_->finished)
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
}

// A stop that races ahead of listen() must not be lost.
void HttpServer::stop() {
  if (!impl_) return;
  impl_->stop_requested = true;
  while (impl_->entered && !impl_->finished) {
    if (impl_->server.is_running()) {
      impl_->server.stop();
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

void serve(SystemDocument doc, const std::string& host, int port,
           const std::optional<std::filesystem::path>& persist) {
  Service service(std::move(doc));
  if (persist && std::filesystem::exists(*persist))
    service.store().load_json(service.document().system, parse_json(read_text_file(*persist)));

  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::cerr << "listening on http://" << host << ":" << bound << "\n";

  g_stop_requested = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.listen();
  g_stop_requested = true;
  watcher.join();

  if (persist) write_text_file(*persist, service.store().to_json(service.document().system).dump(2));
}

}  // namespace scp
