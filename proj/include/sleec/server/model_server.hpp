#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_map>

#include "sleec/engine/machine.hpp"

namespace sleec::server {

/// HTTP service hosting compiled rule machines behind the upload/step
/// lifecycle:
///
///   POST /upload-model[?session=ID]   body: SLEEC source
///       201 {"session","status","rules"} on create, 200 on hot-swap
///       (re-upload keeps the lifecycle status, resets the step counter)
///   POST /sessions/{id}/start | /stop
///   POST /sessions/{id}/step          body: snapshot JSON
///       200 {"result": <obligation set>, "server_us": f, "step": n}
///   GET  /healthz
///
/// Steps are accepted only while running (409 otherwise); requests on one
/// session are serialized in arrival order; different sessions may step
/// concurrently. The "result" object is byte-identical to the in-process
/// step encoding.
class ModelServer {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 = pick any free port
    std::ostream* request_log = nullptr;
    engine::SnapshotMode snapshot_mode = engine::SnapshotMode::Strict;
  };

  ModelServer() : ModelServer(Options()) {}
  explicit ModelServer(Options options);
  ~ModelServer();

  ModelServer(const ModelServer&) = delete;
  ModelServer& operator=(const ModelServer&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  void stop();

  int port() const { return port_; }
  std::string base_url() const;

 private:
  struct Session;
  class Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace sleec::server
