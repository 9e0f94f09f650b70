// crystalcount: analyze, batch, encode and serve front end.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "crystalcount/image_io.hpp"
#include "crystalcount/pipeline.hpp"
#include "crystalcount/rdm.hpp"
#include "crystalcount/service.hpp"

namespace fs = std::filesystem;
using namespace crystal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

std::mutex output_mutex;

void report(const std::string& line) {
  std::lock_guard lock(output_mutex);
  std::cerr << "crystalcount: " << line << '\n';
}

int exit_code_for(const Error& e) { return e.code() == Errc::Io ? kExitInternal : kExitInput; }

ParamSet load_params(const std::string& path) {
  ParamSet params;
  if (path.empty()) return params;
  const Bytes bytes = read_file(path);
  const auto doc = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::InvalidParameter, "parameter file is not valid JSON: " + path);
  apply_overrides(params, doc);
  return params;
}

void write_document(const std::string& document, const std::string& path) {
  if (path.empty() || path == "-") {
    std::lock_guard lock(output_mutex);
    std::cout << document << '\n';
    std::cout.flush();
    return;
  }
  const std::string text = document + '\n';
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

struct AnalyzeOptions {
  std::string image;
  std::string model = "A";
  double um_per_px = 0.0;
  std::string params;
  std::string rdm;
  std::string json;
  std::string overlay;
};

int run_analyze(const AnalyzeOptions& opt) {
  AnalysisRequest request;
  request.model = parse_model(opt.model);
  request.um_per_px = opt.um_per_px;
  request.params = load_params(opt.params);
  request.file_name = fs::path(opt.image).filename().string();
  if (request.model == Model::B && opt.rdm.empty()) {
    report("model B requires --rdm");
    return kExitInput;
  }
  const GrayImage image = load_image(opt.image);
  std::optional<StoredMapProvider> maps;
  if (request.model == Model::B) {
    maps.emplace(read_rdm(opt.rdm));
    request.maps = &*maps;
  }
  const AnalysisOutput output = run_analysis(image, request);
  write_document(result_document(output), opt.json);
  if (!opt.overlay.empty()) write_file(opt.overlay, encode_png(output.overlay));
  return kExitOk;
}

struct BatchOptions {
  std::string dir;
  std::string model = "A";
  double um_per_px = 0.0;
  std::string params;
  std::string out;
  unsigned jobs = 1;
};

bool is_image_path(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".bmp";
}

int run_batch(const BatchOptions& opt) {
  AnalysisRequest base;
  base.model = parse_model(opt.model);
  if (base.model != Model::A) {
    report("batch supports model A only");
    return kExitInput;
  }
  base.um_per_px = opt.um_per_px;
  base.params = load_params(opt.params);
  base.params.validate();
  if (!(opt.um_per_px > 0.0)) throw Error(Errc::InvalidParameter, "--um-per-px must be positive");
  if (!fs::is_directory(opt.dir)) throw Error(Errc::FileNotFound, "not a directory: " + opt.dir);

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(opt.dir)) {
    if (entry.is_regular_file() && is_image_path(entry.path())) inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw Error(Errc::Io, "cannot create output directory " + opt.out);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> internal_failure{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      const fs::path& input = inputs[i];
      const std::string name = input.filename().string();
      try {
        AnalysisRequest request = base;
        request.file_name = name;
        const AnalysisOutput output = run_analysis(load_image(input), request);
        fs::path target = fs::path(opt.out) / input.filename();
        target.replace_extension(".json");
        write_document(result_document(output), target.string());
        std::lock_guard lock(output_mutex);
        std::cout << name << ' ' << output.result.seed_count << '\n';
        std::cout.flush();
      } catch (const Error& e) {
        if (e.code() == Errc::Io) internal_failure = true;
        report("warning: skipped " + name + ": " + e.what());
      } catch (const std::exception& e) {
        internal_failure = true;
        report("error: " + name + ": " + e.what());
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(opt.jobs, 1, std::max<std::size_t>(1, inputs.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return internal_failure ? kExitInternal : kExitOk;
}

int run_encode(const std::string& labels_path, const std::string& out) {
  const Gray16Image raw = load_png16(labels_path);
  LabelMap labels(raw.width(), raw.height());
  int max_label = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    labels[i] = raw[i];
    max_label = std::max<int>(max_label, raw[i]);
  }
  labels.num_labels = max_label;
  write_rdm(encode_ground_truth(labels), out);
  return kExitOk;
}

int run_serve(std::optional<int> port, const std::string& state_dir) {
  ServiceConfig config = config_from_env();
  if (port) config.port = *port;
  if (!state_dir.empty()) config.state_dir = state_dir;

  // Signals are consumed by a dedicated thread so stop() runs outside a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(config);
  const int bound = service.bind();
  {
    std::lock_guard lock(output_mutex);
    std::cout << "listening on http://" << config.host << ':' << bound << std::endl;
  }
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.run();
  // run() may also end without a signal; wake the waiter so it can exit.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crystal counting for microscope images"};
  app.set_version_flag("--version", CRYSTALCOUNT_VERSION);
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one image");
  analyze_cmd->add_option("image", analyze.image, "Input PNG or BMP")->required();
  analyze_cmd->add_option("--model", analyze.model, "A (classical) or B (star-convex)")
      ->check(CLI::IsMember({"A", "B"}))
      ->required();
  analyze_cmd->add_option("--um-per-px", analyze.um_per_px, "Micrometres per pixel")->required();
  analyze_cmd->add_option("--params", analyze.params, "JSON parameter overrides");
  analyze_cmd->add_option("--rdm", analyze.rdm, "Radial distance map (model B)");
  analyze_cmd->add_option("--json", analyze.json, "Result document path (default stdout)");
  analyze_cmd->add_option("--overlay", analyze.overlay, "Overlay PNG path");

  BatchOptions batch;
  auto* batch_cmd = app.add_subcommand("batch", "Analyze every PNG/BMP in a directory");
  batch_cmd->add_option("dir", batch.dir, "Input directory")->required();
  batch_cmd->add_option("--model", batch.model, "Analysis model")->check(CLI::IsMember({"A"}))->required();
  batch_cmd->add_option("--um-per-px", batch.um_per_px, "Micrometres per pixel")->required();
  batch_cmd->add_option("--params", batch.params, "JSON parameter overrides");
  batch_cmd->add_option("--out", batch.out, "Output directory")->required();
  batch_cmd->add_option("--jobs", batch.jobs, "Parallel images")->check(CLI::PositiveNumber);

  std::string labels_path;
  std::string rdm_out;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a 16-bit label PNG as a radial distance map");
  encode_cmd->add_option("labels", labels_path, "16-bit gray label PNG")->required();
  encode_cmd->add_option("--out", rdm_out, "Output RDM path")->required();

  std::optional<int> port;
  std::string state_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP analysis service");
  serve_cmd->add_option("--port", port, "Listen port (0 picks a free port)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--state-dir", state_dir, "Directory holding the analyses counter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze_cmd) return run_analyze(analyze);
    if (*batch_cmd) return run_batch(batch);
    if (*encode_cmd) return run_encode(labels_path, rdm_out);
    if (*serve_cmd) return run_serve(port, state_dir);
  } catch (const Error& e) {
    report(e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    report(std::string("internal error: ") + e.what());
    return kExitInternal;
  }
  return kExitInput;
}
