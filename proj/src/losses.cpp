#include "sdftrack/losses.hpp"

#include <cmath>

#include "sdftrack/error.hpp"
#include "sdftrack/rendering.hpp"

namespace sdftrack {

namespace {

// Subgradient of |x| with sign(0) = 0.
double sgn(double x) { return (x > 0.0) - (x < 0.0); }
Vec3 sgn(const Vec3& v) { return {sgn(v.x()), sgn(v.y()), sgn(v.z())}; }

struct Contribution {
  double geometry = 0.0;
  double color = 0.0;
  Vec3 g_t = Vec3::Zero();
  Vec4 g_q = Vec4::Zero();
};

void accumulate(Contribution& acc, const Contribution& c) {
  acc.geometry += c.geometry;
  acc.color += c.color;
  acc.g_t += c.g_t;
  acc.g_q += c.g_q;
}

// ---------------------------------------------------------------------------
// SDF loss, per point: l_k = lambda_sdf |d| + lambda_color / 3 ||c~ - c||_1

Contribution sdf_point_term(const SceneField& field, const Pose& pose, const PointSample& s,
                            const TrackerConfig& cfg) {
  const FieldDifferential f = field.query_with_derivatives(transform(pose, s.p_cam));
  const Vec3 residual = f.sample.color - s.color;
  const Vec3 dl_dx = cfg.lambda_sdf * sgn(f.sample.sdf) * f.sdf_gradient +
                     (cfg.lambda_color / 3.0) * f.color_jacobian.transpose() * sgn(residual);
  Contribution c;
  c.geometry = std::abs(f.sample.sdf);
  c.color = residual.cwiseAbs().sum();
  c.g_t = dl_dx;
  c.g_q = rotation_jacobian(pose.q, s.p_cam).transpose() * dl_dx;
  return c;
}

LossReport finish_sdf(const Contribution& sum, std::size_t n, const TrackerConfig& cfg) {
  const double inv_n = 1.0 / static_cast<double>(n);
  LossReport r;
  r.geometry_term = sum.geometry * inv_n;
  r.color_term = sum.color * inv_n / 3.0;
  r.total = cfg.lambda_sdf * r.geometry_term + cfg.lambda_color * r.color_term;
  r.g_t = sum.g_t * inv_n;
  r.g_q = sum.g_q * inv_n;
  r.queries = n;
  return r;
}

void check_samples(std::size_t n) {
  if (n == 0) throw InvalidArgument("loss needs at least one sample");
}

// ---------------------------------------------------------------------------
// Volume-rendering loss, per pixel:
//   l_p = lambda_photo / 3 ||C^ - I||_1 + lambda_depth |D^ - D|
//
// Gradient: with tau_j = sigma_j delta_j, T_j the transmittance in front of
// sample j and w_j = T_j (1 - exp(-tau_j)),
//   dl/dtau_j = T_{j+1} G_j - sum_{k>j} w_k G_k,  G_k = g_C . c_k + g_D z t_k
// and each sample point x_j = t + t_j R(q) dir_cam feeds sigma_j and c_j.

Contribution vr_pixel_term(const SceneField& field, const Pose& pose, const Mat3& rot, const Intrinsics& k,
                           const RgbdFrame& frame, const PixelCoord& px, const TrackerConfig& cfg,
                           std::span<const double> offsets) {
  const RenderParams& rp = cfg.vr.render;
  const DensityParams& density = cfg.vr.density;
  const Vec3 dir_cam = pixel_ray_direction(k, px.u, px.v);
  const double z_scale = dir_cam.z();
  const Vec3 dir_world = rot * dir_cam;

  const std::vector<double> t = sample_distances(rp, offsets);
  const std::vector<double> delta = sample_intervals(rp, t);
  const std::size_t n = t.size();

  std::vector<double> tau(n), dsigma(n), weight(n), trans_after(n);
  std::vector<Vec3> color(n), grad(n);
  std::vector<Mat3> color_jac(n);
  for (std::size_t j = 0; j < n; ++j) {
    const FieldDifferential f = field.query_with_derivatives(pose.t + t[j] * dir_world);
    tau[j] = density_from_sdf(f.sample.sdf, density) * delta[j];
    dsigma[j] = density_derivative(f.sample.sdf, density);
    color[j] = f.sample.color;
    grad[j] = f.sdf_gradient;
    color_jac[j] = f.color_jacobian;
  }

  Vec3 rendered = Vec3::Zero();
  double expected_t = 0.0;
  double optical_depth = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weight[j] = std::exp(-optical_depth) * -std::expm1(-tau[j]);
    optical_depth += tau[j];
    trans_after[j] = std::exp(-optical_depth);
    rendered += weight[j] * color[j];
    expected_t += weight[j] * t[j];
  }
  const double rendered_depth = expected_t * z_scale;

  const std::size_t idx = frame.index(px.u, px.v);
  const Vec3 residual = rendered - frame.color[idx].cast<double>();
  const Vec3 g_color = (cfg.vr.lambda_photo / 3.0) * sgn(residual);
  double g_depth = 0.0;

  Contribution c;
  c.color = residual.cwiseAbs().sum();
  if (frame.valid[idx]) {
    const double depth_residual = rendered_depth - static_cast<double>(frame.depth[idx]);
    c.geometry = std::abs(depth_residual);
    g_depth = cfg.vr.lambda_depth * sgn(depth_residual);
  }

  Vec3 moment = Vec3::Zero();  // sum_j t_j dl/dx_j, feeds the rotation gradient
  double behind = 0.0;         // sum_{k>j} w_k G_k
  for (std::size_t jj = n; jj-- > 0;) {
    const double value = g_color.dot(color[jj]) + g_depth * z_scale * t[jj];
    const double dl_dtau = trans_after[jj] * value - behind;
    behind += weight[jj] * value;
    const Vec3 dl_dx =
        (dl_dtau * delta[jj] * dsigma[jj]) * grad[jj] + color_jac[jj].transpose() * (weight[jj] * g_color);
    c.g_t += dl_dx;
    moment += t[jj] * dl_dx;
  }
  c.g_q = rotation_jacobian(pose.q, dir_cam).transpose() * moment;
  return c;
}

LossReport finish_vr(const Contribution& sum, std::size_t m, const TrackerConfig& cfg) {
  const double inv_m = 1.0 / static_cast<double>(m);
  LossReport r;
  r.geometry_term = sum.geometry * inv_m;
  r.color_term = sum.color * inv_m / 3.0;
  r.total = cfg.vr.lambda_depth * r.geometry_term + cfg.vr.lambda_photo * r.color_term;
  r.g_t = sum.g_t * inv_m;
  r.g_q = sum.g_q * inv_m;
  r.queries = m * static_cast<std::uint64_t>(cfg.vr.render.n_samples_per_ray);
  return r;
}

std::span<const double> pixel_offsets(std::span<const double> offsets, std::size_t p, int per_pixel) {
  if (offsets.empty()) return {};
  return offsets.subspan(p * per_pixel, per_pixel);
}

void check_vr_inputs(std::size_t m, std::span<const double> offsets, const TrackerConfig& cfg) {
  check_samples(m);
  if (!offsets.empty() && offsets.size() != m * static_cast<std::size_t>(cfg.vr.render.n_samples_per_ray))
    throw InvalidArgument("vr_loss: offsets must hold n_pixels * n_samples_per_ray values");
}

}  // namespace

LossReport sdf_loss(const SceneField& field, const Pose& pose, std::span<const PointSample> samples,
                    const TrackerConfig& cfg) {
  check_samples(samples.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(samples.size());
  std::vector<Contribution> terms(samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) terms[i] = sdf_point_term(field, pose, samples[i], cfg);
  Contribution sum;
  for (const auto& c : terms) accumulate(sum, c);
  return finish_sdf(sum, samples.size(), cfg);
}

std::vector<double> draw_vr_offsets(std::size_t pixel_count, const RenderParams& params, Rng& rng) {
  if (!params.stratified) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(pixel_count * static_cast<std::size_t>(params.n_samples_per_ray));
  for (double& o : offsets) o = unit(rng);
  return offsets;
}

LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, std::span<const double> offsets) {
  check_vr_inputs(pixels.size(), offsets, cfg);
  const Mat3 rot = pose.q.rotation_matrix();
  const int per_pixel = cfg.vr.render.n_samples_per_ray;
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(pixels.size());
  std::vector<Contribution> terms(pixels.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t p = 0; p < m; ++p)
    terms[p] = vr_pixel_term(field, pose, rot, k, frame, pixels[p], cfg, pixel_offsets(offsets, p, per_pixel));
  Contribution sum;
  for (const auto& c : terms) accumulate(sum, c);
  return finish_vr(sum, pixels.size(), cfg);
}

LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, Rng& rng) {
  const std::vector<double> offsets = draw_vr_offsets(pixels.size(), cfg.vr.render, rng);
  return vr_loss(field, pose, k, frame, pixels, cfg, offsets);
}

namespace reference {

LossReport sdf_loss(const SceneField& field, const Pose& pose, std::span<const PointSample> samples,
                    const TrackerConfig& cfg) {
  check_samples(samples.size());
  Contribution sum;
  for (const auto& s : samples) accumulate(sum, sdf_point_term(field, pose, s, cfg));
  return finish_sdf(sum, samples.size(), cfg);
}

LossReport vr_loss(const SceneField& field, const Pose& pose, const Intrinsics& k, const RgbdFrame& frame,
                   std::span<const PixelCoord> pixels, const TrackerConfig& cfg, std::span<const double> offsets) {
  check_vr_inputs(pixels.size(), offsets, cfg);
  const Mat3 rot = pose.q.rotation_matrix();
  const int per_pixel = cfg.vr.render.n_samples_per_ray;
  Contribution sum;
  for (std::size_t p = 0; p < pixels.size(); ++p)
    accumulate(sum, vr_pixel_term(field, pose, rot, k, frame, pixels[p], cfg, pixel_offsets(offsets, p, per_pixel)));
  return finish_vr(sum, pixels.size(), cfg);
}

}  // namespace reference

}  // namespace sdftrack
