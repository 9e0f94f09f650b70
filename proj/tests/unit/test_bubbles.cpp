#include <gtest/gtest.h>

#include <cmath>

#include "crystalcount/bubbles.hpp"
#include "phantom.hpp"

using namespace crystal;

namespace {

GrayImage dark_disk(int w, int h, double cx, double cy, double r) {
  GrayImage img(w, h, 180);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (std::hypot(x + 0.5 - cx, y + 0.5 - cy) < r) img(x, y) = 60;
    }
  }
  return img;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

}  // namespace

TEST(DetectBubbles, BlankImage) { EXPECT_TRUE(detect_bubbles(GrayImage(200, 200, 150)).empty()); }

TEST(DetectBubbles, HundredPixelDisk) {
  const auto bubbles = detect_bubbles(dark_disk(240, 220, 120, 100, 50));
  ASSERT_EQ(bubbles.size(), 1u);
  const auto& b = bubbles[0];
  // Pixel-index coordinates: the disk center (120, 100) is pixel (119.5, 99.5).
  EXPECT_NEAR(b.center.x, 119.5, 1.0);
  EXPECT_NEAR(b.center.y, 99.5, 1.0);
  EXPECT_NEAR(b.radius, 50.0, 1.5);
  EXPECT_GE(b.circularity, 0.9);
  EXPECT_LE(b.circularity, 1.05);
  EXPECT_NEAR(b.area_px, std::numbers::pi * 50 * 50, 60);
}

TEST(DetectBubbles, RimmedBubbleIsFilled) {
  GrayImage img(300, 300, 170);
  synth::draw_bubble(img, {{150, 150}, 60, 6, 90}, 170);
  const auto bubbles = detect_bubbles(img);
  ASSERT_EQ(bubbles.size(), 1u);
  EXPECT_NEAR(bubbles[0].radius, 60.0, 1.5);
  EXPECT_NEAR(bubbles[0].area_px, std::numbers::pi * 60 * 60, 200);
}

TEST(DetectBubbles, SmallOrElongatedRegionsRejected) {
  EXPECT_TRUE(detect_bubbles(dark_disk(200, 200, 100, 100, 20)).empty());
  GrayImage bar(400, 200, 180);
  for (int y = 85; y < 115; ++y) {
    for (int x = 100; x < 300; ++x) bar(x, y) = 60;
  }
  EXPECT_TRUE(detect_bubbles(bar).empty());
}

TEST(DetectBubbles, ThresholdsAreParameters) {
  BubbleParams relaxed;
  relaxed.min_equiv_diameter = 30;
  EXPECT_EQ(detect_bubbles(dark_disk(200, 200, 100, 100, 20), relaxed).size(), 1u);
}

TEST(ExclusionMask, DiskPlusMarginAndClipping) {
  const std::vector<BubbleRegion> one = {{{10, 10}, 5, 0, 1}};
  const BinaryMask m = exclusion_mask(one, {30, 30}, 2);
  EXPECT_EQ(m(10, 10), 1);
  EXPECT_EQ(m(17, 10), 1);
  EXPECT_EQ(m(18, 10), 0);
  const BinaryMask corner = exclusion_mask({{{0, 0}, 8, 0, 1}}, {20, 20}, 0);
  EXPECT_EQ(corner(0, 0), 1);
  EXPECT_EQ(corner(8, 0), 1);
  EXPECT_EQ(corner(6, 6), 0);
  EXPECT_EQ(count_foreground(exclusion_mask({}, {20, 20}, 5)), 0u);
}

TEST(ExclusionMask, MonotoneInMargin) {
  const std::vector<BubbleRegion> bubbles = {{{40, 30}, 12.3, 0, 1}, {{5, 70}, 20, 0, 1}};
  for (int margin = 0; margin < 10; ++margin) {
    EXPECT_TRUE(subset(exclusion_mask(bubbles, {100, 90}, margin), exclusion_mask(bubbles, {100, 90}, margin + 1)));
  }
}

TEST(BubbleParams, Validation) {
  BubbleParams p;
  EXPECT_NO_THROW(p.validate());
  p.min_circularity = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.margin = -1;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.block = 64;
  EXPECT_THROW(p.validate(), Error);
}
