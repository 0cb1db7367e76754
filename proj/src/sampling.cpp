#include "sdftrack/sampling.hpp"

#include <cmath>
#include <sstream>

#include "sdftrack/error.hpp"

namespace sdftrack {

RgbdFrame RgbdFrame::blank(int width, int height, int frame_index) {
  if (width <= 0 || height <= 0) throw InvalidArgument("frame dimensions must be positive");
  RgbdFrame f;
  f.width = width;
  f.height = height;
  f.frame_index = frame_index;
  f.color.assign(f.pixel_count(), Eigen::Vector3f::Zero());
  f.depth.assign(f.pixel_count(), 0.0f);
  f.valid.assign(f.pixel_count(), 0);
  return f;
}

void RgbdFrame::refresh_valid() {
  valid.resize(depth.size());
  for (std::size_t i = 0; i < depth.size(); ++i) valid[i] = (std::isfinite(depth[i]) && depth[i] > 0.0f) ? 1 : 0;
}

std::size_t RgbdFrame::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid) n += v ? 1 : 0;
  return n;
}

std::vector<int> valid_pixel_indices(const RgbdFrame& frame) {
  std::vector<int> out;
  out.reserve(frame.pixel_count());
  for (std::size_t i = 0; i < frame.valid.size(); ++i)
    if (frame.valid[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<PixelCoord> sample_pixels(const RgbdFrame& frame, const std::vector<int>& valid, int n, Rng& rng) {
  if (valid.empty()) {
    std::ostringstream os;
    os << "frame " << frame.frame_index << " has no valid pixels";
    throw NoValidPixels(os.str());
  }
  if (n < 0) throw InvalidArgument("sample_pixels: n must be non-negative");
  std::uniform_int_distribution<std::size_t> pick(0, valid.size() - 1);
  std::vector<PixelCoord> out(static_cast<std::size_t>(n));
  for (auto& px : out) {
    const int idx = valid[pick(rng)];
    px = {idx % frame.width, idx / frame.width};
  }
  return out;
}

std::vector<PixelCoord> sample_pixels(const RgbdFrame& frame, int n, Rng& rng) {
  return sample_pixels(frame, valid_pixel_indices(frame), n, rng);
}

std::vector<PointSample> build_point_set(const RgbdFrame& frame, const Intrinsics& k,
                                         const std::vector<PixelCoord>& pixels) {
  std::vector<PointSample> out;
  out.reserve(pixels.size());
  for (const auto& px : pixels) {
    const std::size_t idx = frame.index(px.u, px.v);
    if (!frame.valid[idx]) {
      std::ostringstream os;
      os << "pixel (" << px.u << ", " << px.v << ") of frame " << frame.frame_index << " is not valid";
      throw InvalidDepth(os.str());
    }
    out.push_back({px, frame.color[idx].cast<double>(), backproject(k, px.u + 0.5, px.v + 0.5, frame.depth[idx])});
  }
  return out;
}

}  // namespace sdftrack
