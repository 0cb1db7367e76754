#include <cmath>

#include <gtest/gtest.h>

#include "sdftrack/error.hpp"
#include "sdftrack/rendering.hpp"
#include "sdftrack/scene_file.hpp"
#include "sdftrack/synth.hpp"
#include "support/oracles.hpp"

using namespace sdftrack;

namespace {

std::shared_ptr<Primitive> unit_sphere() {
  return std::make_shared<Primitive>(Sphere{Vec3::Zero(), 1.0}, ConstantColor{Vec3(0.8, 0.3, 0.1)});
}

FieldPtr room() { return load_scene(oracle::source_dir() / "scenes" / "room.txt").build_field(); }

}  // namespace

TEST(RenderParams, Validation) {
  EXPECT_NO_THROW(RenderParams{}.validate());
  RenderParams p;
  p.t_near = -0.1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.t_far = p.t_near;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.n_samples_per_ray = 1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.hit_eps = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(SphereTrace, Examples) {
  const auto s = unit_sphere();
  const RenderParams params;
  const auto hit = sphere_trace(*s, {Vec3(-3, 0, 0), Vec3(1, 0, 0)}, params);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->t, 2.0, params.hit_eps);
  EXPECT_FALSE(sphere_trace(*s, {Vec3(-3, 0, 5), Vec3(1, 0, 0)}, params).has_value());

  const Primitive plane(Plane{Vec3(0, 0, 1), 0.0}, ConstantColor{});
  const auto floor_hit = sphere_trace(plane, {Vec3(0, 0, 2), Vec3(0, 0, -1)}, params);
  ASSERT_TRUE(floor_hit.has_value());
  EXPECT_NEAR(floor_hit->t, 2.0, params.hit_eps);
}

TEST(SphereTrace, MissesBeyondFarPlane) {
  const auto s = unit_sphere();
  RenderParams params;
  params.t_far = 1.5;
  EXPECT_FALSE(sphere_trace(*s, {Vec3(-3, 0, 0), Vec3(1, 0, 0)}, params).has_value());
}

TEST(SphereTrace, EveryHitIsOnTheSurface) {
  const FieldPtr field = room();
  const RenderParams params;
  Rng rng(50);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Ray ray{oracle::uniform_vec(rng, -0.9, 0.9), oracle::unit_direction(rng)};
    if (field->signed_distance(ray.origin) <= 0.0) continue;
    field->reset_counters();
    const auto hit = sphere_trace(*field, ray, params);
    EXPECT_LE(field->query_count(), static_cast<std::uint64_t>(params.max_steps));
    if (!hit) continue;
    ++hits;
    EXPECT_LE(std::abs(field->signed_distance(ray.origin + hit->t * ray.dir)), params.hit_eps);
    EXPECT_GE(hit->t, params.t_near);
    EXPECT_LE(hit->t, params.t_far);
  }
  EXPECT_GT(hits, 5000);
}

TEST(RenderFrame, HeadOnSphere) {
  const auto s = unit_sphere();
  const Intrinsics k{32.5, 24.5, 32.5, 24.5, 65, 49};  // 90 degree horizontal field of view
  const RenderParams params;
  const RgbdFrame f = render_frame(*s, Pose{Vec3(0, 0, -3), Quaternion::identity()}, k, params);
  ASSERT_TRUE(f.valid[f.index(32, 24)]);
  EXPECT_NEAR(f.depth[f.index(32, 24)], 2.0, params.hit_eps);
  EXPECT_NEAR((f.color[f.index(32, 24)].cast<double>() - Vec3(0.8, 0.3, 0.1)).norm(), 0.0, 1e-6);
  for (auto [u, v] : {std::pair{0, 0}, {64, 0}, {0, 48}, {64, 48}}) {
    EXPECT_FALSE(f.valid[f.index(u, v)]);
    EXPECT_EQ(f.depth[f.index(u, v)], 0.0f);
  }
}

TEST(RenderFrame, DeterministicAndMatchesSerialReference) {
  const FieldPtr field = room();
  const Intrinsics k = intrinsics_from_fov(40, 30, 70.0);
  const Pose pose = look_at(Vec3(1.0, 0.2, 0.3), Vec3::Zero(), Vec3::UnitZ());
  const RgbdFrame a = render_frame(*field, pose, k, {}, 3);
  const RgbdFrame b = render_frame(*field, pose, k, {}, 3);
  const RgbdFrame r = reference::render_frame(*field, pose, k, {}, 3);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.color, b.color);
  EXPECT_EQ(a.depth, r.depth);
  EXPECT_EQ(a.color, r.color);
  EXPECT_EQ(a.valid, r.valid);
  EXPECT_EQ(a.frame_index, 3);
}

TEST(RenderFrame, BackprojectedPixelsLieOnTheSurface) {
  const FieldPtr field = room();
  const Intrinsics k = intrinsics_from_fov(64, 48, 60.0);
  const RenderParams params;
  const Pose pose = look_at(Vec3(1.0, -0.3, 0.3), Vec3::Zero(), Vec3::UnitZ());
  const RgbdFrame f = render_frame(*field, pose, k, params);
  int valid = 0;
  for (int v = 0; v < f.height; ++v)
    for (int u = 0; u < f.width; ++u) {
      if (!f.valid[f.index(u, v)]) continue;
      ++valid;
      const Vec3 p = transform(pose, backproject(k, u + 0.5, v + 0.5, f.depth[f.index(u, v)]));
      EXPECT_LE(std::abs(field->signed_distance(p)), 2 * params.hit_eps);
    }
  EXPECT_GT(valid, f.width * f.height / 2);
}

TEST(PixelRayDirection, PassesThroughPixelCenter) {
  const Intrinsics k = intrinsics_from_fov(64, 48, 60.0);
  const Vec3 d = pixel_ray_direction(k, 10, 20);
  EXPECT_NEAR(d.norm(), 1.0, 1e-12);
  const Eigen::Vector2d px = project(k, d);
  EXPECT_NEAR(px.x(), 10.5, 1e-9);
  EXPECT_NEAR(px.y(), 20.5, 1e-9);
}

TEST(Quadrature, SampleDistances) {
  RenderParams p;
  p.t_near = 1.0;
  p.t_far = 2.0;
  p.n_samples_per_ray = 4;
  const auto mid = sample_distances(p, {});
  ASSERT_EQ(mid.size(), 4u);
  EXPECT_DOUBLE_EQ(mid[0], 1.125);
  EXPECT_DOUBLE_EQ(mid[3], 1.875);
  const auto delta = sample_intervals(p, mid);
  EXPECT_DOUBLE_EQ(delta[0], 0.25);
  EXPECT_DOUBLE_EQ(delta[3], 2.0 - 1.875);

  Rng rng(51);
  const auto offsets = draw_offsets(p, rng);
  ASSERT_EQ(offsets.size(), 4u);
  const auto t = sample_distances(p, offsets);
  for (int j = 0; j < 4; ++j) {
    EXPECT_GE(t[j], 1.0 + 0.25 * j);
    EXPECT_LT(t[j], 1.0 + 0.25 * (j + 1));
  }
  p.stratified = false;
  EXPECT_TRUE(draw_offsets(p, rng).empty());
}

TEST(Compositing, ClosedFormTransmittance) {
  const double ln2 = std::log(2.0);
  const auto w = compositing_weights(std::vector<double>{ln2, ln2}, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.25, 1e-15);
  EXPECT_NEAR(w[0] + w[1], 0.75, 1e-15);
}

TEST(Compositing, OpaqueFrontSample) {
  const auto w = compositing_weights(std::vector<double>{100.0, 3.0, 7.0}, std::vector<double>{0.5, 0.2, 0.1});
  EXPECT_GE(w[0], 1.0 - 1e-9);
  EXPECT_LE(w[1] + w[2], 1e-9);
}

TEST(Compositing, WeightsAreAPartialPartitionOfUnity) {
  Rng rng(52);
  std::uniform_real_distribution<double> s(0.0, 300.0), d(0.0, 0.3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> sigma(32), delta(32);
    for (int j = 0; j < 32; ++j) {
      sigma[j] = trial % 3 == 0 ? 0.0 : s(rng);
      delta[j] = d(rng);
    }
    double sum = 0.0;
    for (double w : compositing_weights(sigma, delta)) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_LE(sum, 1.0 + 1e-9);
  }
}

TEST(VolumeRender, EmptySpace) {
  const Primitive far(Sphere{Vec3(100, 100, 100), 1.0}, ConstantColor{Vec3(1, 1, 1)});
  const auto r = volume_render_ray(far, {200.0, 0.02}, {Vec3::Zero(), Vec3::UnitX()}, RenderParams{}, {});
  EXPECT_EQ(r.opacity, 0.0);
  EXPECT_EQ(r.color, Vec3::Zero());
  EXPECT_EQ(r.depth, 0.0);
}

TEST(VolumeRender, HeadOnSphereDepthWithinThreeScales) {
  const auto s = unit_sphere();
  RenderParams params;
  params.n_samples_per_ray = 256;
  params.stratified = false;
  const Ray ray{Vec3(-3, 0, 0), Vec3(1, 0, 0)};
  const auto traced = sphere_trace(*s, ray, params);
  ASSERT_TRUE(traced.has_value());
  const DensityParams density{200.0, 0.02};
  const auto r = volume_render_ray(*s, density, ray, params, {});
  EXPECT_NEAR(r.depth, traced->t, 3 * density.s);
  EXPECT_GT(r.opacity, 0.999);
  EXPECT_NEAR((r.color - Vec3(0.8, 0.3, 0.1)).norm(), 0.0, 1e-3);
}

TEST(VolumeRender, DepthIsZDepth) {
  const Primitive wall(Plane{Vec3(0, 0, -1), -2.0}, ConstantColor{});  // z = 2
  RenderParams params;
  params.n_samples_per_ray = 512;
  params.stratified = false;
  const Vec3 dir = Vec3(0.3, 0.0, 1.0).normalized();
  const auto r = volume_render_ray(wall, {50.0, 0.02}, {Vec3::Zero(), dir}, params, {}, dir.z());
  EXPECT_NEAR(r.depth, 2.0, 0.01);
}

TEST(VolumeRender, IssuesExactlyNQueries) {
  const FieldPtr field = room();
  RenderParams params;
  Rng rng(53);
  for (int n : {2, 32, 97}) {
    params.n_samples_per_ray = n;
    field->reset_counters();
    volume_render_ray(*field, {200.0, 0.02}, {Vec3::Zero(), Vec3::UnitX()}, params, rng);
    EXPECT_EQ(field->query_count(), static_cast<std::uint64_t>(n));
  }
}

TEST(GenerateSequence, ClosedOrbit) {
  const OrbitSpec orbit{Vec3(0.1, -0.2, 0.0), 1.0, 0.3, 1.0};
  const Pose first = trajectory_pose(orbit, 0, 361);
  const Pose full_turn = trajectory_pose(orbit, 360, 361);
  EXPECT_LT((full_turn.t - first.t).norm(), 1e-6);
  EXPECT_LT(geodesic_rotation_error(first.q, full_turn.q), 1e-6);
  const Trajectory t = make_trajectory(orbit, 360);
  ASSERT_EQ(t.size(), 360u);
  EXPECT_NEAR((t.back().pose.t - first.t).norm(), 2.0 * std::sin(0.5 * std::numbers::pi / 180.0), 1e-12);
}

TEST(GenerateSequence, LineEndpoints) {
  const LineSpec line{Vec3(-0.5, -1, 0.3), Vec3(0.5, -1, 0.3), Vec3::Zero()};
  const Trajectory t = make_trajectory(line, 5);
  EXPECT_EQ(t.front().pose.t, line.start);
  EXPECT_EQ(t.back().pose.t, line.end);
}

TEST(GenerateSequence, NoiseFreeMatchesRenderer) {
  const FieldPtr field = room();
  SynthOptions opts;
  opts.frames = 3;
  const Dataset d = generate_sequence(*field, opts);
  ASSERT_EQ(d.frames.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    const RgbdFrame f = render_frame(*field, d.groundtruth[i].pose, opts.intrinsics, opts.render, i);
    EXPECT_EQ(d.frames[i].depth, f.depth);
    EXPECT_EQ(d.frames[i].color, f.color);
  }
}

TEST(GenerateSequence, SeededNoiseIsReproducible) {
  const FieldPtr field = room();
  SynthOptions opts;
  opts.frames = 2;
  opts.depth_noise_std = 0.01;
  opts.seed = 5;
  const Dataset a = generate_sequence(*field, opts), b = generate_sequence(*field, opts);
  opts.seed = 6;
  const Dataset c = generate_sequence(*field, opts);
  EXPECT_EQ(a.frames[1].depth, b.frames[1].depth);
  EXPECT_NE(a.frames[1].depth, c.frames[1].depth);
  for (float z : a.frames[0].depth) EXPECT_GE(z, 0.0f);
}

TEST(GenerateSequence, RejectsTooFewFrames) {
  SynthOptions opts;
  opts.frames = 1;
  EXPECT_THROW(generate_sequence(*room(), opts), InvalidArgument);
}
