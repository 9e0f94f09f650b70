#include "crystalcount/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <semaphore>
#include <thread>

#include "crystalcount/base64.hpp"
#include "crystalcount/image_io.hpp"
#include "crystalcount/pipeline.hpp"
#include "crystalcount/rdm.hpp"

#ifndef CRYSTALCOUNT_VERSION
#define CRYSTALCOUNT_VERSION "0.0.0"
#endif

namespace crystal {

namespace fs = std::filesystem;

CounterStore::CounterStore(fs::path state_dir) : file_(std::move(state_dir) / "total_analyses") {
  std::error_code ec;
  fs::create_directories(file_.parent_path(), ec);
  if (ec) throw Error(Errc::Io, "cannot create state directory " + file_.parent_path().string());
  std::ifstream in(file_);
  if (in) {
    long long stored = 0;
    if (in >> stored && stored >= 0) value_ = stored;
  }
}

long long CounterStore::value() const {
  std::lock_guard lock(mutex_);
  return value_;
}

long long CounterStore::increment() {
  std::lock_guard lock(mutex_);
  const long long next = value_ + 1;
  const fs::path tmp = file_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << next << '\n';
    out.flush();
    if (!out) throw Error(Errc::Io, "cannot write counter file");
  }
  std::error_code ec;
  fs::rename(tmp, file_, ec);
  if (ec) throw Error(Errc::Io, "cannot replace counter file: " + ec.message());
  value_ = next;
  return next;
}

ServiceConfig config_from_env(ServiceConfig base) {
  if (const char* port = std::getenv("CRYSTALCOUNT_PORT"); port != nullptr && *port != '\0') {
    base.port = std::atoi(port);
  }
  if (const char* state = std::getenv("CRYSTALCOUNT_STATE"); state != nullptr && *state != '\0') {
    base.state_dir = state;
  }
  return base;
}

namespace {

constexpr std::size_t kMaxMapBytes = std::size_t{1} << 30;

std::mutex log_mutex;

void log_line(const std::string& line) {
  std::lock_guard lock(log_mutex);
  std::cerr << "[crystalcount] " << line << '\n';
}

int status_for(Errc code) {
  switch (code) {
    case Errc::MissingRadialMap: return 422;
    case Errc::Io: return 500;
    default: return 400;
  }
}

HttpReply error_reply(int status, const std::string& message) {
  return {status, nlohmann::json{{"error", message}}.dump()};
}

struct PayloadTooLarge {
  std::string what;
};

nlohmann::json parse_object(const std::string& body) {
  nlohmann::json request = nlohmann::json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    throw Error(Errc::InvalidParameter, "request body must be a JSON object");
  }
  return request;
}

std::string required_string(const nlohmann::json& request, const char* key) {
  const auto it = request.find(key);
  if (it == request.end() || !it->is_string()) {
    throw Error(Errc::InvalidParameter, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::vector<std::uint8_t> decode_payload(const nlohmann::json& request, const char* key, std::size_t limit) {
  std::vector<std::uint8_t> bytes = base64_decode(required_string(request, key));
  if (bytes.size() > limit) {
    throw PayloadTooLarge{std::string(key) + " exceeds " + std::to_string(limit) + " bytes"};
  }
  return bytes;
}

}  // namespace

struct Service::Impl {
  explicit Impl(unsigned workers) : analysis_slots(static_cast<std::ptrdiff_t>(workers)) {}

  httplib::Server server;
  std::counting_semaphore<4096> analysis_slots;
  int bound_port = -1;
};

Service::Service(ServiceConfig config)
    : config_(std::move(config)), counter_(config_.state_dir) {
  if (config_.workers == 0) config_.workers = std::max(1u, std::thread::hardware_concurrency());
  config_.workers = std::min(config_.workers, 4096u);
  impl_ = std::make_unique<Impl>(config_.workers);

  auto& server = impl_->server;
  const std::size_t http_threads = config_.workers + 4;
  server.new_task_queue = [http_threads] { return new httplib::ThreadPool(http_threads); };
  // SO_REUSEADDR only: the library default also sets SO_REUSEPORT, which would
  // let a second instance share an occupied port instead of failing.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  server.set_payload_max_length((config_.max_upload_bytes + kMaxMapBytes) / 3 * 4 + (std::size_t{1} << 20));

  auto respond = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server.Post("/api/analyze", [this, respond](const httplib::Request& req, httplib::Response& res) {
    respond(res, analyze(req.body));
  });
  server.Post("/api/detect_bubbles", [this, respond](const httplib::Request& req, httplib::Response& res) {
    respond(res, detect_bubbles(req.body));
  });
  server.Get("/api/stats", [this, respond](const httplib::Request&, httplib::Response& res) {
    respond(res, stats());
  });
  server.Get("/api/health", [respond](const httplib::Request&, httplib::Response& res) {
    respond(res, health());
  });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  const std::string origin = config_.cors_origin;
  server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    if (origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    log_line(req.method + " " + req.path + " " + std::to_string(res.status));
  });
}

Service::~Service() { stop(); }

int Service::bind() {
  auto& server = impl_->server;
  if (config_.port == 0) {
    impl_->bound_port = server.bind_to_any_port(config_.host);
  } else {
    impl_->bound_port = server.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (impl_->bound_port < 0) {
    throw Error(Errc::Io, "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
  }
  return impl_->bound_port;
}

void Service::run() {
  if (impl_->bound_port < 0) throw Error(Errc::Io, "service is not bound");
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

HttpReply Service::analyze(const std::string& body) {
  try {
    const nlohmann::json request = parse_object(body);
    AnalysisRequest analysis;
    analysis.file_name = required_string(request, "file_name");
    analysis.model = parse_model(required_string(request, "model"));
    const auto um = request.find("um_per_px");
    if (um == request.end() || !um->is_number()) {
      throw Error(Errc::InvalidParameter, "missing numeric field 'um_per_px'");
    }
    analysis.um_per_px = um->get<double>();
    if (const auto params = request.find("params"); params != request.end()) {
      apply_overrides(analysis.params, *params);
    }
    const GrayImage image = decode_image(decode_payload(request, "image", config_.max_upload_bytes));

    std::unique_ptr<StoredMapProvider> maps;
    if (analysis.model == Model::B) {
      const auto rdm = request.find("rdm");
      if (rdm == request.end() || rdm->is_null()) {
        throw Error(Errc::MissingRadialMap, "model B requires an 'rdm' payload");
      }
      maps = std::make_unique<StoredMapProvider>(decode_rdm(decode_payload(request, "rdm", kMaxMapBytes)));
      analysis.maps = maps.get();
    }

    impl_->analysis_slots.acquire();
    std::string document;
    try {
      document = result_document(run_analysis(image, analysis));
    } catch (...) {
      impl_->analysis_slots.release();
      throw;
    }
    impl_->analysis_slots.release();
    counter_.increment();
    return {200, std::move(document)};
  } catch (const PayloadTooLarge& e) {
    return error_reply(413, e.what);
  } catch (const Error& e) {
    const int status = status_for(e.code());
    if (status == 500) {
      log_line(std::string("analyze failed: ") + e.what());
      return error_reply(500, "internal error");
    }
    return error_reply(status, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, "malformed request");
  } catch (const std::exception& e) {
    log_line(std::string("analyze failed: ") + e.what());
    return error_reply(500, "internal error");
  }
}

HttpReply Service::detect_bubbles(const std::string& body) {
  try {
    const nlohmann::json request = parse_object(body);
    ParamSet params;
    if (const auto overrides = request.find("params"); overrides != request.end()) {
      apply_overrides(params, *overrides);
    }
    const GrayImage image = decode_image(decode_payload(request, "image", config_.max_upload_bytes));
    impl_->analysis_slots.acquire();
    std::string document;
    try {
      document = bubble_document(preview_bubbles(image, params.bubble));
    } catch (...) {
      impl_->analysis_slots.release();
      throw;
    }
    impl_->analysis_slots.release();
    return {200, std::move(document)};
  } catch (const PayloadTooLarge& e) {
    return error_reply(413, e.what);
  } catch (const Error& e) {
    const int status = status_for(e.code());
    if (status == 500) {
      log_line(std::string("detect_bubbles failed: ") + e.what());
      return error_reply(500, "internal error");
    }
    return error_reply(status, e.what());
  } catch (const nlohmann::json::exception&) {
    return error_reply(400, "malformed request");
  } catch (const std::exception& e) {
    log_line(std::string("detect_bubbles failed: ") + e.what());
    return error_reply(500, "internal error");
  }
}

HttpReply Service::stats() const {
  return {200, nlohmann::json{{"total_analyses", counter_.value()}}.dump()};
}

HttpReply Service::health() {
  return {200, nlohmann::json{{"status", "ok"}, {"version", CRYSTALCOUNT_VERSION}}.dump()};
}

}  // namespace crystal
