#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace cgm {

struct ServiceOptions {
  std::chrono::milliseconds default_budget{10000};
  std::chrono::seconds session_ttl{3600};
  std::string cors_origin = "*";
  // Injected for tests; steady_clock::now by default.
  std::function<std::chrono::steady_clock::time_point()> clock;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::string content_type;
  std::string session = "default";
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// The HTTP facade without the transport: routes a request against the
// in-memory session store. Thread-safe; distinct sessions never share state.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const HttpRequest& request);

  std::size_t session_count();
  const ServiceOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// cpp-httplib transport around a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds to host:port (port 0 picks a free one) and returns the port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cgm
