#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

namespace crystal {

/// Durable analyses counter: one decimal integer in a text file, replaced by
/// write-to-temp plus rename so a crash never leaves a torn value.
class CounterStore {
 public:
  explicit CounterStore(std::filesystem::path state_dir);

  long long value() const;
  /// Adds one, persists, and returns the new value.
  long long increment();

  const std::filesystem::path& file() const noexcept { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::mutex mutex_;
  long long value_ = 0;
};

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path state_dir = "crystalcount-state";
  std::size_t max_upload_bytes = std::size_t{32} << 20;
  unsigned workers = 0;  // 0: one per hardware thread
  std::string cors_origin = "*";
};

/// Applies CRYSTALCOUNT_PORT / CRYSTALCOUNT_STATE when set.
ServiceConfig config_from_env(ServiceConfig base = {});

struct HttpReply {
  int status = 200;
  std::string body;
};

/// HTTP front end: POST /api/analyze, POST /api/detect_bubbles,
/// GET /api/stats, GET /api/health. Request images are never written to disk;
/// the counter file is the only persisted state.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket; returns the bound port (useful with port 0).
  /// Throws Error(Io) when the address is unavailable.
  int bind();
  /// Serves until stop(); requires a successful bind().
  void run();
  void stop();

  // Transport-free handlers, also used by the HTTP routes.
  HttpReply analyze(const std::string& body);
  HttpReply detect_bubbles(const std::string& body);
  HttpReply stats() const;
  static HttpReply health();

  long long total_analyses() const { return counter_.value(); }

 private:
  struct Impl;

  ServiceConfig config_;
  CounterStore counter_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace crystal
