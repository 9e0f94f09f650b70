#include "crystalcount/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>

#include "crystalcount/base64.hpp"
#include "crystalcount/image_io.hpp"
#include "crystalcount/raster.hpp"

namespace crystal {

void ParamSet::validate() const {
  classical.validate();
  bubble.validate();
  star.validate();
}

namespace {

using Setter = std::function<void(ParamSet&, const nlohmann::json&)>;

int as_int(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
  }
  throw Error(Errc::InvalidParameter, "parameter '" + key + "' must be an integer");
}

double as_double(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  throw Error(Errc::InvalidParameter, "parameter '" + key + "' must be a number");
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"block", [](ParamSet& p, const nlohmann::json& v) { p.classical.block = as_int(v, "block"); }},
      {"offset", [](ParamSet& p, const nlohmann::json& v) { p.classical.offset = as_int(v, "offset"); }},
      {"canny_low", [](ParamSet& p, const nlohmann::json& v) { p.classical.canny_low = as_double(v, "canny_low"); }},
      {"canny_high", [](ParamSet& p, const nlohmann::json& v) { p.classical.canny_high = as_double(v, "canny_high"); }},
      {"smooth_bright_k", [](ParamSet& p, const nlohmann::json& v) { p.classical.smooth_bright_k = as_int(v, "smooth_bright_k"); }},
      {"smooth_dark_k", [](ParamSet& p, const nlohmann::json& v) { p.classical.smooth_dark_k = as_int(v, "smooth_dark_k"); }},
      {"close_bright_k", [](ParamSet& p, const nlohmann::json& v) { p.classical.close_bright_k = as_int(v, "close_bright_k"); }},
      {"close_dark_k", [](ParamSet& p, const nlohmann::json& v) { p.classical.close_dark_k = as_int(v, "close_dark_k"); }},
      {"tile", [](ParamSet& p, const nlohmann::json& v) { p.classical.tile = as_int(v, "tile"); }},
      {"min_area_0or1_hole", [](ParamSet& p, const nlohmann::json& v) { p.classical.min_area_0or1_hole = as_double(v, "min_area_0or1_hole"); }},
      {"min_area_multi_hole", [](ParamSet& p, const nlohmann::json& v) { p.classical.min_area_multi_hole = as_double(v, "min_area_multi_hole"); }},
      {"solidity_max_0hole", [](ParamSet& p, const nlohmann::json& v) { p.classical.solidity_max_0hole = as_double(v, "solidity_max_0hole"); }},
      {"min_equiv_diameter", [](ParamSet& p, const nlohmann::json& v) { p.bubble.min_equiv_diameter = as_double(v, "min_equiv_diameter"); }},
      {"min_circularity", [](ParamSet& p, const nlohmann::json& v) { p.bubble.min_circularity = as_double(v, "min_circularity"); }},
      {"margin", [](ParamSet& p, const nlohmann::json& v) { p.bubble.margin = as_int(v, "margin"); }},
      {"dark_threshold_offset", [](ParamSet& p, const nlohmann::json& v) { p.bubble.dark_threshold_offset = as_int(v, "dark_threshold_offset"); }},
      {"bubble_block", [](ParamSet& p, const nlohmann::json& v) { p.bubble.block = as_int(v, "bubble_block"); }},
      {"prob_threshold", [](ParamSet& p, const nlohmann::json& v) { p.star.prob_threshold = as_double(v, "prob_threshold"); }},
      {"nms_iou", [](ParamSet& p, const nlohmann::json& v) { p.star.nms_iou = as_double(v, "nms_iou"); }},
      {"grid_step", [](ParamSet& p, const nlohmann::json& v) { p.star.grid_step = as_int(v, "grid_step"); }},
  };
  return table;
}

}  // namespace

void apply_overrides(ParamSet& params, const nlohmann::json& overrides) {
  if (overrides.is_null()) return;
  if (!overrides.is_object()) throw Error(Errc::InvalidParameter, "params must be an object");
  ParamSet updated = params;
  for (const auto& [key, value] : overrides.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(Errc::InvalidParameter, "unknown parameter '" + key + "'");
    it->second(updated, value);
  }
  updated.validate();
  params = updated;
}

Model parse_model(std::string_view text) {
  if (text == "A") return Model::A;
  if (text == "B") return Model::B;
  throw Error(Errc::InvalidParameter, "model must be \"A\" or \"B\"");
}

AnalysisOutput run_analysis(const GrayImage& image, const AnalysisRequest& request) {
  if (!(request.um_per_px > 0.0) || !std::isfinite(request.um_per_px)) {
    throw Error(Errc::InvalidParameter, "um_per_px must be positive");
  }
  request.params.validate();
  if (request.model == Model::B && request.maps == nullptr) {
    throw Error(Errc::MissingRadialMap, "model B needs a radial map (rdm)");
  }

  AnalysisOutput output;
  output.um_per_px = request.um_per_px;
  output.bubbles = detect_bubbles(image, request.params.bubble);
  const BinaryMask exclusion = exclusion_mask(output.bubbles, image.dims(), request.params.bubble.margin);

  if (request.model == Model::A) {
    output.instances = analyze_classical(image, request.params.classical, exclusion);
  } else {
    const GrayImage dimmed = dim_bright_pixels(image);
    const RadialMap map = request.maps->radial_map(dimmed);
    if (map.dims() != image.dims()) {
      throw Error(Errc::DimensionMismatch, "radial map is " + std::to_string(map.width()) + "x" +
                                               std::to_string(map.height()) + ", image is " +
                                               std::to_string(image.width()) + "x" +
                                               std::to_string(image.height()));
    }
    map.validate();
    output.instances = analyze_star(map, request.params.star, exclusion);
  }

  output.result = compute_result(output.instances, exclusion, image.dims(), Calibration{request.um_per_px},
                                 request.file_name, request.model);
  output.overlay = render_overlay(image, output.instances, output.bubbles);
  return output;
}

RgbImage render_overlay(const GrayImage& image, const std::vector<CrystalInstance>& instances,
                        const std::vector<BubbleRegion>& bubbles) {
  RgbImage overlay(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) overlay[i] = {image[i], image[i], image[i]};
  auto paint = [&](double x, double y, Rgb color) {
    const int px = static_cast<int>(std::lround(x));
    const int py = static_cast<int>(std::lround(y));
    if (overlay.contains(px, py)) overlay(px, py) = color;
  };
  for (const auto& bubble : bubbles) {
    const int steps = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * bubble.radius * 2.0)));
    for (int s = 0; s < steps; ++s) {
      const double t = 2.0 * std::numbers::pi * s / steps;
      paint(bubble.center.x + bubble.radius * std::cos(t), bubble.center.y + bubble.radius * std::sin(t),
            kBubbleGreen);
    }
  }
  for (const auto& instance : instances) {
    for (const auto& p : instance.boundary) paint(p.x, p.y, kNeonGreen);
  }
  return overlay;
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

namespace {

nlohmann::json number(double v) { return round_significant(v); }

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : nlohmann::json(nullptr);
}

nlohmann::json point(const Point2& p) { return nlohmann::json::array({number(p.x), number(p.y)}); }

}  // namespace

nlohmann::json result_json(const AnalysisOutput& output) {
  const AnalysisResult& r = output.result;
  nlohmann::json doc = nlohmann::json::object();
  doc["file_name"] = r.file_name;
  doc["model"] = std::string(to_string(r.model));
  doc["seed_count"] = r.seed_count;
  doc["crystals_per_mm2"] = optional_number(r.crystals_per_mm2);
  doc["mean_size_um"] = number(r.mean_size_um);
  doc["coverage_percent"] = optional_number(r.coverage_percent);
  doc["analyzed_area_mm2"] = number(r.analyzed_area_mm2);
  doc["bubble_area_fraction"] = number(r.bubble_area_fraction);

  nlohmann::json edges = nlohmann::json::array();
  for (double e : r.histogram.edges_um) edges.push_back(number(e));
  doc["histogram"] = {{"edges_um", edges}, {"counts", r.histogram.counts}};

  nlohmann::json instances = nlohmann::json::array();
  for (const auto& instance : output.instances) {
    nlohmann::json boundary = nlohmann::json::array();
    for (const auto& p : instance.boundary) boundary.push_back(point(p));
    instances.push_back({
        {"id", instance.id},
        {"centroid", point(instance.centroid)},
        {"area_px", number(instance.area_px)},
        {"equiv_diameter_um", number(equivalent_diameter_um(instance.area_px, output.um_per_px))},
        {"boundary", std::move(boundary)},
    });
  }
  doc["instances"] = std::move(instances);
  doc["overlay_png"] = base64_encode(encode_png(output.overlay));
  return doc;
}

std::string result_document(const AnalysisOutput& output) { return result_json(output).dump(); }

BubblePreview preview_bubbles(const GrayImage& image, const BubbleParams& params) {
  BubblePreview preview;
  preview.bubbles = detect_bubbles(image, params);
  preview.overlay = render_overlay(image, {}, preview.bubbles);
  return preview;
}

std::string bubble_document(const BubblePreview& preview) {
  nlohmann::json bubbles = nlohmann::json::array();
  for (const auto& b : preview.bubbles) {
    bubbles.push_back({
        {"center", point(b.center)},
        {"radius", number(b.radius)},
        {"area_px", number(b.area_px)},
        {"circularity", number(b.circularity)},
    });
  }
  nlohmann::json doc = {{"bubbles", std::move(bubbles)},
                        {"overlay_png", base64_encode(encode_png(preview.overlay))}};
  return doc.dump();
}

}  // namespace crystal
