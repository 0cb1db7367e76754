#pragma once

#include <vector>

#include "sdftrack/frame.hpp"
#include "sdftrack/geometry.hpp"
#include "sdftrack/random.hpp"

namespace sdftrack {

struct PixelCoord {
  int u = 0;
  int v = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// A colored camera-frame point, backprojected through the pixel center.
struct PointSample {
  PixelCoord pixel;
  Vec3 color = Vec3::Zero();
  Vec3 p_cam = Vec3::Zero();
};

/// Row-major indices of all valid pixels.
std::vector<int> valid_pixel_indices(const RgbdFrame& frame);

/// n uniform draws with replacement over the valid pixels. Throws
/// NoValidPixels when the mask is empty.
std::vector<PixelCoord> sample_pixels(const RgbdFrame& frame, int n, Rng& rng);
/// Same, with the valid list precomputed by valid_pixel_indices.
std::vector<PixelCoord> sample_pixels(const RgbdFrame& frame, const std::vector<int>& valid, int n, Rng& rng);

/// One PointSample per pixel; every pixel must be valid (InvalidDepth otherwise).
std::vector<PointSample> build_point_set(const RgbdFrame& frame, const Intrinsics& k,
                                         const std::vector<PixelCoord>& pixels);

}  // namespace sdftrack
