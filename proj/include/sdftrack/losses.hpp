#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdftrack/config.hpp"
#include "sdftrack/frame.hpp"
#include "sdftrack/geometry.hpp"
#include "sdftrack/random.hpp"
#include "sdftrack/sampling.hpp"
#include "sdftrack/scene_field.hpp"

namespace sdftrack {

/// Loss value, its two weighted terms and the gradient w.r.t. the pose.
///
/// For the SDF loss `geometry_term` is mean |d| and `color_term` the mean
/// per-channel L1 color residual. For the volume-rendering loss they are the
/// mean absolute depth residual and the mean per-channel photometric residual.
struct LossReport {
  double total = 0.0;
  double geometry_term = 0.0;
  double color_term = 0.0;
  std::uint64_t queries = 0;
  Vec3 g_t = Vec3::Zero();
  Vec4 g_q = Vec4::Zero();  // (w, x, y, z)
};

/// Point-to-SDF loss
///   l = lambda_sdf / n * sum |d_k| + lambda_color / (3n) * sum ||c~_k - c_k||_1
/// evaluated at the world points transform(pose, p_k). One field query with
/// derivatives per sample; OpenMP-parallel with an index-ordered reduction.
LossReport sdf_loss(const SceneField& field, const Pose& pose, std::span<const PointSample> samples,
                    const TrackerConfig& cfg);

/// Volume-rendering loss over the sampled pixels
///   l = lambda_photo / (3m) sum ||C^_p - I_p||_1 + lambda_depth / m sum |D^_p - D_p|
/// with explicit per-pixel stratification offsets (`offsets` holds
/// m * n_samples_per_ray values, or is empty for the midpoint rule).
/// Pixels with invalid observed depth skip the depth term.
LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, std::span<const double> offsets);
/// Draws fresh offsets from `rng`, then evaluates as above.
LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, Rng& rng);

/// m * n_samples_per_ray offsets in pixel-major order (empty when not stratified).
std::vector<double> draw_vr_offsets(std::size_t pixel_count, const RenderParams& params, Rng& rng);

namespace reference {

/// Serial loops over the same per-element math; must agree bitwise with the
/// parallel kernels.
LossReport sdf_loss(const SceneField& field, const Pose& pose, std::span<const PointSample> samples,
                    const TrackerConfig& cfg);
LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, std::span<const double> offsets);

}  // namespace reference

}  // namespace sdftrack
