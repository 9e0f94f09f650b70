#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "crystalcount/stats.hpp"

using namespace crystal;

namespace {

CrystalInstance instance(double area, int crystals = 1) {
  CrystalInstance i;
  i.area_px = area;
  i.crystal_count = crystals;
  return i;
}

}  // namespace

TEST(EquivalentDiameter, HandComputed) {
  EXPECT_NEAR(equivalent_diameter_um(100, 1.0), 11.283791670955125, 1e-12);
  EXPECT_NEAR(equivalent_diameter_um(std::numbers::pi, 0.5), 1.0, 1e-12);
  EXPECT_EQ(equivalent_diameter_um(0, 3.0), 0.0);
}

TEST(ComputeResult, SingleInstanceOneSquareMillimetre) {
  const std::vector<CrystalInstance> one = {instance(100)};
  const AnalysisResult r = compute_result(one, {}, {1000, 1000}, {1.0}, "a.png", Model::A);
  EXPECT_EQ(r.file_name, "a.png");
  EXPECT_EQ(r.seed_count, 1);
  EXPECT_NEAR(r.analyzed_area_mm2, 1.0, 1e-12);
  ASSERT_TRUE(r.crystals_per_mm2);
  EXPECT_NEAR(*r.crystals_per_mm2, 1.0, 1e-12);
  EXPECT_NEAR(r.mean_size_um, 11.2838, 1e-4);
  ASSERT_TRUE(r.coverage_percent);
  EXPECT_NEAR(*r.coverage_percent, 0.01, 1e-12);
  EXPECT_EQ(r.bubble_area_fraction, 0.0);
  EXPECT_EQ(r.histogram.counts, std::vector<int>{1});
}

TEST(ComputeResult, NoInstances) {
  const AnalysisResult r = compute_result({}, {}, {64, 64}, {1.0}, "blank.png", Model::A);
  EXPECT_EQ(r.seed_count, 0);
  EXPECT_EQ(r.mean_size_um, 0.0);
  EXPECT_EQ(*r.crystals_per_mm2, 0.0);
  EXPECT_EQ(*r.coverage_percent, 0.0);
  EXPECT_TRUE(r.histogram.counts.empty());
  EXPECT_TRUE(r.histogram.edges_um.empty());
}

TEST(ComputeResult, SeedCountSumsCrystalCounts) {
  const std::vector<CrystalInstance> xs = {instance(50, 1), instance(80, 3), instance(30, 2)};
  EXPECT_EQ(compute_result(xs, {}, {100, 100}, {1.0}, "", Model::A).seed_count, 6);
}

TEST(ComputeResult, ExclusionReducesAnalyzedArea) {
  BinaryMask exclusion(100, 100);
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 100; ++x) exclusion(x, y) = 1;
  }
  const std::vector<CrystalInstance> xs = {instance(10), instance(10)};
  const AnalysisResult r = compute_result(xs, exclusion, {100, 100}, {10.0}, "", Model::B);
  EXPECT_NEAR(r.analyzed_area_mm2, 5000 * 1e-4, 1e-12);
  EXPECT_NEAR(r.bubble_area_fraction, 0.5, 1e-12);
  EXPECT_NEAR(*r.crystals_per_mm2, 2 / 0.5, 1e-9);
  EXPECT_NEAR(*r.coverage_percent, 100.0 * 20 / 5000, 1e-12);
}

TEST(ComputeResult, FullyExcludedGivesNullDensities) {
  const BinaryMask all(10, 10, 1);
  const AnalysisResult r = compute_result({}, all, {10, 10}, {1.0}, "", Model::A);
  EXPECT_FALSE(r.crystals_per_mm2.has_value());
  EXPECT_FALSE(r.coverage_percent.has_value());
  EXPECT_EQ(r.analyzed_area_mm2, 0.0);
  EXPECT_EQ(r.bubble_area_fraction, 1.0);
}

TEST(ComputeResult, HistogramBinsOverMaxDiameter) {
  // Areas scale with d^2: diameters at 10%, 50%, 55% and 100% of the largest.
  const std::vector<CrystalInstance> xs = {instance(1), instance(25), instance(30.25), instance(100)};
  const AnalysisResult r = compute_result(xs, {}, {100, 100}, {1.0}, "", Model::A);
  ASSERT_EQ(r.histogram.edges_um.size(), 11u);
  ASSERT_EQ(r.histogram.counts.size(), 10u);
  EXPECT_EQ(r.histogram.edges_um.front(), 0.0);
  EXPECT_NEAR(r.histogram.edges_um.back(), equivalent_diameter_um(100, 1.0), 1e-12);
  EXPECT_EQ(r.histogram.counts, (std::vector<int>{0, 1, 0, 0, 0, 2, 0, 0, 0, 1}));
}

TEST(ComputeResult, EqualDiametersDegenerateHistogram) {
  const std::vector<CrystalInstance> xs = {instance(40), instance(40)};
  const AnalysisResult r = compute_result(xs, {}, {100, 100}, {1.0}, "", Model::A);
  EXPECT_EQ(r.histogram.counts, std::vector<int>{2});
  ASSERT_EQ(r.histogram.edges_um.size(), 2u);
  EXPECT_EQ(r.histogram.edges_um[0], r.histogram.edges_um[1]);
}

TEST(ComputeResult, UnitsLaw) {
  const std::vector<CrystalInstance> xs = {instance(12), instance(55), instance(230), instance(7, 2)};
  BinaryMask exclusion(300, 200);
  for (int x = 0; x < 40; ++x) exclusion(x, 7) = 1;
  const AnalysisResult base = compute_result(xs, exclusion, {300, 200}, {1.3}, "", Model::A);
  for (double s : {0.5, 2.0, 3.7}) {
    const AnalysisResult r = compute_result(xs, exclusion, {300, 200}, {1.3 * s}, "", Model::A);
    EXPECT_EQ(r.seed_count, base.seed_count);
    EXPECT_EQ(*r.coverage_percent, *base.coverage_percent);
    EXPECT_NEAR(r.mean_size_um / (base.mean_size_um * s), 1.0, 1e-9);
    EXPECT_NEAR(*r.crystals_per_mm2 / (*base.crystals_per_mm2 / (s * s)), 1.0, 1e-9);
    EXPECT_EQ(r.histogram.counts, base.histogram.counts);
  }
}

TEST(ComputeResult, RejectsBadCalibration) {
  EXPECT_THROW(compute_result({}, {}, {10, 10}, {0.0}, "", Model::A), Error);
  EXPECT_THROW(compute_result({}, {}, {10, 10}, {-1.0}, "", Model::A), Error);
  EXPECT_THROW(compute_result({}, BinaryMask(9, 10), {10, 10}, {1.0}, "", Model::A), Error);
}

TEST(ModelNames, ToString) {
  EXPECT_EQ(to_string(Model::A), "A");
  EXPECT_EQ(to_string(Model::B), "B");
}
