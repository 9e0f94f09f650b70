#include "phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace crystal::synth {

namespace {

struct Footprint {
  Point2 center;
  double radius;
};

bool fits(const Footprint& f, const std::vector<Footprint>& placed, double gap) {
  for (const auto& p : placed) {
    const double d = std::hypot(f.center.x - p.center.x, f.center.y - p.center.y);
    if (d < f.radius + p.radius + gap) return false;
  }
  return true;
}

Point2 random_center(std::mt19937_64& rng, Dims dims, double radius, double gap) {
  const double margin = radius + gap;
  std::uniform_real_distribution<double> ux(margin, dims.width - margin);
  std::uniform_real_distribution<double> uy(margin, dims.height - margin);
  return {ux(rng), uy(rng)};
}

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

template <typename Inside>
void paint(GrayImage& image, Point2 center, double reach, Inside inside, int value) {
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - reach)));
  const int x1 = std::min(image.width() - 1, static_cast<int>(std::ceil(center.x + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - reach)));
  const int y1 = std::min(image.height() - 1, static_cast<int>(std::ceil(center.y + reach)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double d = std::hypot(x + 0.5 - center.x, y + 0.5 - center.y);
      if (inside(d)) image(x, y) = clamp8(value);
    }
  }
}

}  // namespace

void draw_ring(GrayImage& image, const Ring& ring, int background) {
  const double inner = ring.outer_radius - ring.thickness;
  paint(image, ring.center, ring.outer_radius + 1,
        [&](double d) { return d >= inner && d < ring.outer_radius; }, background - ring.contrast);
}

void draw_bubble(GrayImage& image, const Bubble& bubble, int background) {
  const double inner = bubble.radius - bubble.rim;
  paint(image, bubble.center, bubble.radius + 1,
        [&](double d) { return d >= inner && d < bubble.radius; }, background - bubble.contrast);
}

GrayImage render(Dims dims, const std::vector<Ring>& rings, const std::vector<Bubble>& bubbles,
                 int background, double noise_sigma, std::uint64_t seed) {
  GrayImage image(dims, clamp8(background));
  for (const auto& b : bubbles) draw_bubble(image, b, background);
  for (const auto& r : rings) draw_ring(image, r, background);
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& v : image) v = clamp8(v + noise(rng));
  }
  return image;
}

Phantom make_phantom(const PhantomOptions& options) {
  const Dims dims{options.width, options.height};
  std::mt19937_64 rng(options.seed);
  std::vector<Footprint> placed;
  Phantom phantom;

  constexpr int kAttempts = 10000;
  std::uniform_real_distribution<double> bubble_d(options.min_bubble_diameter, options.max_bubble_diameter);
  std::uniform_int_distribution<int> bubble_contrast(80, 110);
  for (int i = 0; i < options.bubbles; ++i) {
    const double radius = bubble_d(rng) / 2.0;
    int attempt = 0;
    for (; attempt < kAttempts; ++attempt) {
      const Footprint f{random_center(rng, dims, radius, options.gap), radius};
      // Bubbles keep a wider berth so their exclusion disk never reaches a ring.
      if (fits(f, placed, options.gap * 2)) {
        placed.push_back(f);
        phantom.bubbles.push_back({f.center, radius, 6.0, bubble_contrast(rng)});
        break;
      }
    }
    if (attempt == kAttempts) throw std::runtime_error("phantom: no room for bubble");
  }

  std::uniform_real_distribution<double> ring_d(options.min_ring_diameter, options.max_ring_diameter);
  std::uniform_int_distribution<int> contrast(options.min_contrast, options.max_contrast);
  for (int i = 0; i < options.rings; ++i) {
    const double radius = ring_d(rng) / 2.0;
    int attempt = 0;
    for (; attempt < kAttempts; ++attempt) {
      const Footprint f{random_center(rng, dims, radius, options.gap), radius};
      if (fits(f, placed, options.gap)) {
        placed.push_back(f);
        phantom.rings.push_back({f.center, radius, 2.0, contrast(rng)});
        break;
      }
    }
    if (attempt == kAttempts) throw std::runtime_error("phantom: no room for ring");
  }

  phantom.image = render(dims, phantom.rings, phantom.bubbles, options.background, options.noise_sigma,
                         options.seed);
  return phantom;
}

double Blob::radius_at(double angle) const {
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0) a += two_pi;
  const double pos = a / two_pi * static_cast<double>(radii.size());
  const auto k = static_cast<std::size_t>(pos) % radii.size();
  const double t = pos - std::floor(pos);
  return radii[k] * (1.0 - t) + radii[(k + 1) % radii.size()] * t;
}

double Blob::max_radius() const { return *std::max_element(radii.begin(), radii.end()); }
double Blob::min_radius() const { return *std::min_element(radii.begin(), radii.end()); }

BlobMap make_blob_map(Dims dims, int count, double min_radius, double max_radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> base(min_radius, max_radius);
  std::uniform_real_distribution<double> wobble(0.75, 1.0);
  std::uniform_int_distribution<int> controls(5, 9);
  BlobMap out{LabelMap(dims), {}};
  std::vector<Footprint> placed;
  constexpr double kGap = 4.0;
  for (int i = 0; i < count; ++i) {
    Blob blob;
    const double r = base(rng);
    blob.radii.resize(static_cast<std::size_t>(controls(rng)));
    for (auto& c : blob.radii) c = std::max(min_radius, r * wobble(rng));
    int attempt = 0;
    for (; attempt < 10000; ++attempt) {
      const Footprint f{random_center(rng, dims, blob.max_radius(), kGap), blob.max_radius()};
      if (fits(f, placed, kGap)) {
        placed.push_back(f);
        blob.center = f.center;
        break;
      }
    }
    if (attempt == 10000) throw std::runtime_error("blob map: no room");
    const int id = static_cast<int>(out.blobs.size()) + 1;
    const double reach = blob.max_radius() + 1;
    for (int y = std::max(0, static_cast<int>(blob.center.y - reach));
         y <= std::min(dims.height - 1, static_cast<int>(blob.center.y + reach)); ++y) {
      for (int x = std::max(0, static_cast<int>(blob.center.x - reach));
           x <= std::min(dims.width - 1, static_cast<int>(blob.center.x + reach)); ++x) {
        const double dx = x + 0.5 - blob.center.x;
        const double dy = y + 0.5 - blob.center.y;
        if (std::hypot(dx, dy) < blob.radius_at(std::atan2(dy, dx))) out.labels(x, y) = id;
      }
    }
    out.blobs.push_back(std::move(blob));
  }
  out.labels.num_labels = static_cast<int>(out.blobs.size());
  return out;
}

GrayImage random_image(int width, int height, std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(lo, hi);
  GrayImage image(width, height);
  for (auto& v : image) v = static_cast<std::uint8_t>(value(rng));
  return image;
}

}  // namespace crystal::synth
