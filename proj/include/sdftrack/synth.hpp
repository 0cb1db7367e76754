#pragma once

#include <cstdint>
#include <variant>

#include "sdftrack/rendering.hpp"
#include "sdftrack/scene_field.hpp"
#include "sdftrack/trajectory.hpp"

namespace sdftrack {

/// Circle of `radius` around `center` at `height` above it (world z up),
/// always looking at `center`.
struct OrbitSpec {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  double height = 0.3;
  double degrees_per_frame = 0.25;
};

/// Straight segment from `start` (frame 0) to `end` (last frame), looking at `look_at`.
struct LineSpec {
  Vec3 start = Vec3(-0.5, -1.0, 0.3);
  Vec3 end = Vec3(0.5, -1.0, 0.3);
  Vec3 look_at = Vec3::Zero();
};

using TrajectorySpec = std::variant<OrbitSpec, LineSpec>;

Pose trajectory_pose(const TrajectorySpec& spec, int frame, int frame_count);
Trajectory make_trajectory(const TrajectorySpec& spec, int frame_count);

/// Pinhole intrinsics with the given horizontal field of view and the
/// principal point at the image center.
Intrinsics intrinsics_from_fov(int width, int height, double horizontal_fov_deg);

struct SynthOptions {
  TrajectorySpec trajectory = OrbitSpec{};
  Intrinsics intrinsics = intrinsics_from_fov(64, 48, 60.0);
  int frames = 40;
  RenderParams render;
  double depth_noise_std = 0.0;  // m, i.i.d. Gaussian on valid pixels
  std::uint64_t seed = 1;
  double rate_hz = 10.0;
};

/// Renders the sequence in memory. Throws InvalidArgument when frames < 2.
Dataset generate_sequence(const SceneField& field, const SynthOptions& opts);

}  // namespace sdftrack
