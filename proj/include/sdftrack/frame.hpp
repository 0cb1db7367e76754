#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace sdftrack {

/// One color + depth observation. Pixels are stored row-major (v * width + u).
/// Depth is camera z in meters; 0 marks an invalid pixel.
struct RgbdFrame {
  int width = 0;
  int height = 0;
  int frame_index = 0;
  std::vector<Eigen::Vector3f> color;
  std::vector<float> depth;
  std::vector<std::uint8_t> valid;

  static RgbdFrame blank(int width, int height, int frame_index = 0);

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  /// Recomputes the valid mask as depth > 0 and finite.
  void refresh_valid();
  std::size_t valid_count() const;
};

}  // namespace sdftrack
