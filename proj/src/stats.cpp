#include "crystalcount/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crystal {

std::string_view to_string(Model model) noexcept { return model == Model::A ? "A" : "B"; }

double equivalent_diameter_um(double area_px, double um_per_px) {
  return 2.0 * std::sqrt(area_px / std::numbers::pi) * um_per_px;
}

AnalysisResult compute_result(std::span<const CrystalInstance> instances, const BinaryMask& exclusion,
                              Dims dims, Calibration calibration, std::string file_name, Model model,
                              int bins) {
  if (!(calibration.um_per_px > 0.0) || !std::isfinite(calibration.um_per_px)) {
    throw Error(Errc::InvalidParameter, "um_per_px must be positive");
  }
  if (bins < 1) throw Error(Errc::InvalidParameter, "histogram needs at least one bin");
  if (!exclusion.empty() && exclusion.dims() != dims) {
    throw Error(Errc::DimensionMismatch, "exclusion mask dimensions differ from the image");
  }

  AnalysisResult result;
  result.file_name = std::move(file_name);
  result.model = model;

  const std::size_t total_px = dims.area();
  const std::size_t excluded_px = exclusion.empty() ? 0 : count_foreground(exclusion);
  const std::size_t analyzed_px = total_px - excluded_px;
  const double mm_per_px = calibration.um_per_px / 1000.0;
  result.analyzed_area_mm2 = static_cast<double>(analyzed_px) * mm_per_px * mm_per_px;
  result.bubble_area_fraction = total_px == 0 ? 0.0 : static_cast<double>(excluded_px) / static_cast<double>(total_px);

  double covered_px = 0.0;
  double diameter_sum = 0.0;
  double max_area = 0.0;
  double min_area = 0.0;
  for (const auto& instance : instances) {
    result.seed_count += instance.crystal_count;
    covered_px += instance.area_px;
    diameter_sum += equivalent_diameter_um(instance.area_px, calibration.um_per_px);
    max_area = std::max(max_area, instance.area_px);
    min_area = &instance == instances.data() ? instance.area_px : std::min(min_area, instance.area_px);
  }
  if (!instances.empty()) result.mean_size_um = diameter_sum / static_cast<double>(instances.size());
  if (analyzed_px > 0) {
    result.crystals_per_mm2 = static_cast<double>(result.seed_count) / result.analyzed_area_mm2;
    result.coverage_percent = 100.0 * covered_px / static_cast<double>(analyzed_px);
  }

  if (!instances.empty()) {
    const double max_diameter = equivalent_diameter_um(max_area, calibration.um_per_px);
    if (min_area == max_area) {
      result.histogram.edges_um = {max_diameter, max_diameter};
      result.histogram.counts = {static_cast<int>(instances.size())};
    } else {
      result.histogram.edges_um.resize(static_cast<std::size_t>(bins) + 1);
      for (int i = 0; i <= bins; ++i) {
        result.histogram.edges_um[static_cast<std::size_t>(i)] = max_diameter * i / bins;
      }
      result.histogram.counts.assign(static_cast<std::size_t>(bins), 0);
      for (const auto& instance : instances) {
        // Diameter ratios are calibration-free: d / d_max = sqrt(a / a_max).
        const double ratio = std::sqrt(instance.area_px / max_area);
        const int bin = std::min(bins - 1, static_cast<int>(std::floor(ratio * bins)));
        ++result.histogram.counts[static_cast<std::size_t>(bin)];
      }
    }
  }
  return result;
}

}  // namespace crystal
