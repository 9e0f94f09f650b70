#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crystalcount/image.hpp"
#include "crystalcount/instance.hpp"

namespace crystal {

/// A: classical morphological pipeline. B: star-convex decoder.
enum class Model { A, B };

std::string_view to_string(Model model) noexcept;

struct Calibration {
  double um_per_px = 1.0;
};

struct Histogram {
  std::vector<double> edges_um;
  std::vector<int> counts;
};

/// Operator-facing metrics. Per-area fields are empty when the exclusion
/// covers the whole image.
struct AnalysisResult {
  std::string file_name;
  Model model = Model::A;
  long long seed_count = 0;
  std::optional<double> crystals_per_mm2;
  double mean_size_um = 0.0;
  std::optional<double> coverage_percent;
  double analyzed_area_mm2 = 0.0;
  double bubble_area_fraction = 0.0;
  Histogram histogram;
};

/// Diameter of the circle with the same area, in micrometres.
double equivalent_diameter_um(double area_px, double um_per_px);

AnalysisResult compute_result(std::span<const CrystalInstance> instances, const BinaryMask& exclusion,
                              Dims dims, Calibration calibration, std::string file_name, Model model,
                              int bins = 10);

}  // namespace crystal
