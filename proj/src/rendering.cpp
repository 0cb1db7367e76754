#include "sdftrack/rendering.hpp"

#include <algorithm>
#include <cmath>

#include "sdftrack/error.hpp"

namespace sdftrack {

void RenderParams::validate() const {
  if (!(t_near >= 0.0) || !(t_far > t_near)) throw InvalidArgument("render params: need 0 <= t_near < t_far");
  if (n_samples_per_ray < 2) throw InvalidArgument("render params: n_samples_per_ray must be >= 2");
  if (!(hit_eps > 0.0)) throw InvalidArgument("render params: hit_eps must be positive");
  if (max_steps < 1) throw InvalidArgument("render params: max_steps must be >= 1");
}

std::optional<TraceHit> sphere_trace(const SceneField& field, const Ray& ray, const RenderParams& params) {
  double t = params.t_near;
  const double min_step = 0.5 * params.hit_eps;
  for (int step = 0; step < params.max_steps; ++step) {
    const FieldSample s = field.query(ray.origin + t * ray.dir);
    if (std::abs(s.sdf) <= params.hit_eps) return TraceHit{t, s};
    t += std::max(s.sdf, min_step);
    if (t > params.t_far) return std::nullopt;
  }
  return std::nullopt;
}

Vec3 pixel_ray_direction(const Intrinsics& k, int u, int v) {
  return Vec3((u + 0.5 - k.cx) / k.fx, (v + 0.5 - k.cy) / k.fy, 1.0).normalized();
}

namespace {

void render_pixel(const SceneField& field, const Pose& pose, const Mat3& rot, const Intrinsics& k,
                  const RenderParams& params, int u, int v, RgbdFrame& frame) {
  const Vec3 dir_cam = pixel_ray_direction(k, u, v);
  const Ray ray{pose.t, rot * dir_cam};
  const std::size_t idx = frame.index(u, v);
  if (const auto hit = sphere_trace(field, ray, params)) {
    frame.depth[idx] = static_cast<float>(hit->t * dir_cam.z());
    frame.color[idx] = hit->sample.color.cast<float>();
    frame.valid[idx] = frame.depth[idx] > 0.0f ? 1 : 0;
  }
}

}  // namespace

RgbdFrame render_frame(const SceneField& field, const Pose& pose, const Intrinsics& k, const RenderParams& params,
                       int frame_index) {
  k.validate();
  params.validate();
  RgbdFrame frame = RgbdFrame::blank(k.width, k.height, frame_index);
  const Mat3 rot = pose.q.rotation_matrix();
#pragma omp parallel for schedule(dynamic, 1)
  for (int v = 0; v < k.height; ++v)
    for (int u = 0; u < k.width; ++u) render_pixel(field, pose, rot, k, params, u, v, frame);
  return frame;
}

namespace reference {

RgbdFrame render_frame(const SceneField& field, const Pose& pose, const Intrinsics& k, const RenderParams& params,
                       int frame_index) {
  k.validate();
  params.validate();
  RgbdFrame frame = RgbdFrame::blank(k.width, k.height, frame_index);
  const Mat3 rot = pose.q.rotation_matrix();
  for (int v = 0; v < k.height; ++v)
    for (int u = 0; u < k.width; ++u) render_pixel(field, pose, rot, k, params, u, v, frame);
  return frame;
}

}  // namespace reference

std::vector<double> sample_distances(const RenderParams& params, std::span<const double> offsets) {
  const int n = params.n_samples_per_ray;
  if (!offsets.empty() && offsets.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("sample_distances: offset count does not match n_samples_per_ray");
  const double step = (params.t_far - params.t_near) / n;
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = params.t_near + (j + (offsets.empty() ? 0.5 : offsets[j])) * step;
  return t;
}

std::vector<double> sample_intervals(const RenderParams& params, std::span<const double> t) {
  std::vector<double> delta(t.size());
  for (std::size_t j = 0; j + 1 < t.size(); ++j) delta[j] = t[j + 1] - t[j];
  if (!t.empty()) delta.back() = params.t_far - t.back();
  return delta;
}

std::vector<double> draw_offsets(const RenderParams& params, Rng& rng) {
  if (!params.stratified) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(params.n_samples_per_ray);
  for (double& o : offsets) o = unit(rng);
  return offsets;
}

std::vector<double> compositing_weights(std::span<const double> sigma, std::span<const double> delta) {
  if (sigma.size() != delta.size()) throw InvalidArgument("compositing_weights: size mismatch");
  std::vector<double> w(sigma.size());
  double optical_depth = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double tau = sigma[j] * delta[j];
    w[j] = std::exp(-optical_depth) * -std::expm1(-tau);
    optical_depth += tau;
  }
  return w;
}

VolumeRenderResult volume_render_ray(const SceneField& field, const DensityParams& density, const Ray& ray,
                                     const RenderParams& params, std::span<const double> offsets, double z_scale) {
  const std::vector<double> t = sample_distances(params, offsets);
  const std::vector<double> delta = sample_intervals(params, t);
  std::vector<double> sigma(t.size());
  std::vector<Vec3> color(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const FieldSample s = field.query(ray.origin + t[j] * ray.dir);
    sigma[j] = density_from_sdf(s.sdf, density);
    color[j] = s.color;
  }
  const std::vector<double> w = compositing_weights(sigma, delta);
  VolumeRenderResult out;
  double expected_t = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    out.color += w[j] * color[j];
    expected_t += w[j] * t[j];
    out.opacity += w[j];
  }
  out.depth = expected_t * z_scale;
  return out;
}

VolumeRenderResult volume_render_ray(const SceneField& field, const DensityParams& density, const Ray& ray,
                                     const RenderParams& params, Rng& rng, double z_scale) {
  const std::vector<double> offsets = draw_offsets(params, rng);
  return volume_render_ray(field, density, ray, params, offsets, z_scale);
}

}  // namespace sdftrack
