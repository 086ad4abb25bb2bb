#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "scp/system_io.hpp"
#include "scp/workbench.hpp"

namespace scp {

struct HttpResponse {
  int status = 200;
  std::string body;
};

/// Transport-independent request handling for the HTTP API:
///   GET /system, GET /status, GET /runs, POST /runs,
///   GET /runs/{id}, DELETE /runs/{id}
/// Errors are JSON bodies {"error": ..., "field": ...}.
class Service {
 public:
  explicit Service(SystemDocument doc);

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  const SystemDocument& document() const { return doc_; }
  RunStore& store() { return store_; }

 private:
  HttpResponse post_run(std::string_view body);
  HttpResponse status() const;

  SystemDocument doc_;
  RunStore store_;
  std::atomic<int> active_{0};
  std::atomic<std::uint64_t> completed_{0};
};

/// cpp-httplib front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port`; port 0 picks a free port. Returns the bound port.
  /// Throws Error when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a prior bind().
  void listen();
  /// Blocks until listen() accepts connections or has returned.
  void wait_until_ready() const;
  /// Safe from any thread, also before listen() starts.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking server with SIGINT/SIGTERM shutdown. When `persist` is set the
/// run history is loaded from it at start (if present) and written back on
/// shutdown.
void serve(SystemDocument doc, const std::string& host, int port,
           const std::optional<std::filesystem::path>& persist = std::nullopt);

}  // namespace scp
