#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdftrack/frame.hpp"
#include "sdftrack/geometry.hpp"
#include "sdftrack/random.hpp"
#include "sdftrack/scene_field.hpp"

namespace sdftrack {

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 dir = Vec3::UnitZ();  // unit length
};

struct RenderParams {
  double t_near = 0.05;  // ray length, m
  double t_far = 4.0;
  int n_samples_per_ray = 32;
  double hit_eps = 1e-4;
  int max_steps = 256;
  bool stratified = true;

  void validate() const;
};

struct TraceHit {
  double t = 0.0;
  FieldSample sample;  // field value at the hit point
};

/// Sphere tracing. Every step issues one counted field query.
std::optional<TraceHit> sphere_trace(const SceneField& field, const Ray& ray, const RenderParams& params);

/// Unit camera-frame direction through the center of pixel (u, v).
Vec3 pixel_ray_direction(const Intrinsics& k, int u, int v);

/// Ground-truth RGB-D rendering by sphere tracing, OpenMP-parallel over rows.
RgbdFrame render_frame(const SceneField& field, const Pose& pose, const Intrinsics& k, const RenderParams& params,
                       int frame_index = 0);

/// Sample distances t_j along a ray: t_near + (j + offset_j) * step, with
/// offset_j = 0.5 when `offsets` is empty (midpoint rule).
std::vector<double> sample_distances(const RenderParams& params, std::span<const double> offsets);
/// delta_j = t_{j+1} - t_j, last delta = t_far - t_N.
std::vector<double> sample_intervals(const RenderParams& params, std::span<const double> t);
/// Draws per-sample stratification offsets in [0,1) (or none when not stratified).
std::vector<double> draw_offsets(const RenderParams& params, Rng& rng);

/// w_j = exp(-sum_{k<j} sigma_k delta_k) (1 - exp(-sigma_j delta_j)).
std::vector<double> compositing_weights(std::span<const double> sigma, std::span<const double> delta);

struct VolumeRenderResult {
  Vec3 color = Vec3::Zero();
  double depth = 0.0;  // z-depth: expected ray distance times z_scale
  double opacity = 0.0;
};

/// Density-based volume rendering of one ray with explicit stratification
/// offsets. `z_scale` converts ray distance to camera z (the ray direction's
/// camera-frame z component). Issues exactly n_samples_per_ray queries.
VolumeRenderResult volume_render_ray(const SceneField& field, const DensityParams& density, const Ray& ray,
                                     const RenderParams& params, std::span<const double> offsets,
                                     double z_scale = 1.0);
VolumeRenderResult volume_render_ray(const SceneField& field, const DensityParams& density, const Ray& ray,
                                     const RenderParams& params, Rng& rng, double z_scale = 1.0);

namespace reference {

/// Straight serial loop; must agree bitwise with sdftrack::render_frame.
RgbdFrame render_frame(const SceneField& field, const Pose& pose, const Intrinsics& k, const RenderParams& params,
                       int frame_index = 0);

}  // namespace reference

}  // namespace sdftrack
