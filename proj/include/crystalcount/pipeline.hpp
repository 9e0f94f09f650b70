#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "crystalcount/bubbles.hpp"
#include "crystalcount/classical.hpp"
#include "crystalcount/starconvex.hpp"
#include "crystalcount/stats.hpp"

namespace crystal {

inline constexpr Rgb kNeonGreen{57, 255, 20};
inline constexpr Rgb kBubbleGreen{0, 200, 0};

struct ParamSet {
  ClassicalParams classical;
  BubbleParams bubble;
  StarParams star;

  void validate() const;
};

/// Applies a flat {name: value} override record. Unknown names and values of
/// the wrong type throw Error(InvalidParameter).
void apply_overrides(ParamSet& params, const nlohmann::json& overrides);

Model parse_model(std::string_view text);

struct AnalysisRequest {
  std::string file_name;
  Model model = Model::A;
  double um_per_px = 1.0;
  ParamSet params;
  /// Required for model B; ignored for model A.
  const MapProvider* maps = nullptr;
};

struct AnalysisOutput {
  AnalysisResult result;
  std::vector<CrystalInstance> instances;
  std::vector<BubbleRegion> bubbles;
  RgbImage overlay;
  double um_per_px = 1.0;
};

/// The single analysis path shared by the CLI and the service.
AnalysisOutput run_analysis(const GrayImage& image, const AnalysisRequest& request);

/// Input image with bubble circles in green and instance outlines in neon green.
RgbImage render_overlay(const GrayImage& image, const std::vector<CrystalInstance>& instances,
                        const std::vector<BubbleRegion>& bubbles);

/// Numbers rounded to 6 significant digits, per-area fields null when the
/// analyzed area is empty, keys in lexicographic order.
nlohmann::json result_json(const AnalysisOutput& output);

/// Serialized result document, byte-identical for identical inputs.
std::string result_document(const AnalysisOutput& output);

struct BubblePreview {
  std::vector<BubbleRegion> bubbles;
  RgbImage overlay;
};

BubblePreview preview_bubbles(const GrayImage& image, const BubbleParams& params);
std::string bubble_document(const BubblePreview& preview);

double round_significant(double value, int digits = 6);

}  // namespace crystal
