#pragma once

// Synthetic micrographs with known ground truth.

#include <cstdint>
#include <vector>

#include "crystalcount/image.hpp"

namespace crystal::synth {

/// Dark annulus: pixels whose center lies in [outer - thickness, outer).
struct Ring {
  Point2 center;
  double outer_radius = 10.0;
  double thickness = 2.0;
  int contrast = 80;
};

/// Air bubble: thick dark rim around a background-bright interior.
struct Bubble {
  Point2 center;
  double radius = 40.0;
  double rim = 6.0;
  int contrast = 90;
};

struct PhantomOptions {
  int width = 2048;
  int height = 1536;
  int rings = 40;
  int bubbles = 0;
  std::uint64_t seed = 1;
  int background = 170;
  double noise_sigma = 2.0;
  int min_contrast = 60;
  int max_contrast = 100;
  double min_ring_diameter = 15.0;
  double max_ring_diameter = 40.0;
  double min_bubble_diameter = 60.0;
  double max_bubble_diameter = 140.0;
  /// Minimum clearance between any two objects and from the border.
  double gap = 12.0;
};

struct Phantom {
  GrayImage image;
  std::vector<Ring> rings;
  std::vector<Bubble> bubbles;
};

/// Places non-overlapping rings and bubbles at random and renders them.
Phantom make_phantom(const PhantomOptions& options);

/// Renders the objects over a flat background with Gaussian noise.
GrayImage render(Dims dims, const std::vector<Ring>& rings, const std::vector<Bubble>& bubbles,
                 int background, double noise_sigma, std::uint64_t seed);

void draw_ring(GrayImage& image, const Ring& ring, int background);
void draw_bubble(GrayImage& image, const Bubble& bubble, int background);

/// Star-convex blob: radius linearly interpolated between equally spaced
/// control angles around the center.
struct Blob {
  Point2 center;
  std::vector<double> radii;

  double radius_at(double angle) const;
  double max_radius() const;
  double min_radius() const;
};

struct BlobMap {
  LabelMap labels;
  std::vector<Blob> blobs;
};

/// Disjoint blobs labelled 1..n in placement order; a pixel belongs to a blob
/// when its center lies strictly inside the blob outline.
BlobMap make_blob_map(Dims dims, int count, double min_radius, double max_radius, std::uint64_t seed);

/// Uniform random 8-bit image.
GrayImage random_image(int width, int height, std::uint64_t seed, int lo = 0, int hi = 255);

}  // namespace crystal::synth
