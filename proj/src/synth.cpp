#include "sdftrack/synth.hpp"

#include <cmath>
#include <numbers>

#include "sdftrack/error.hpp"
#include "sdftrack/random.hpp"

namespace sdftrack {

Pose trajectory_pose(const TrajectorySpec& spec, int frame, int frame_count) {
  if (const auto* orbit = std::get_if<OrbitSpec>(&spec)) {
    const double theta = frame * orbit->degrees_per_frame * std::numbers::pi / 180.0;
    const Vec3 eye = orbit->center + Vec3(orbit->radius * std::cos(theta), orbit->radius * std::sin(theta), orbit->height);
    return look_at(eye, orbit->center, Vec3::UnitZ());
  }
  const auto& line = std::get<LineSpec>(spec);
  const double s = frame_count > 1 ? static_cast<double>(frame) / (frame_count - 1) : 0.0;
  const Vec3 eye = line.start + s * (line.end - line.start);
  return look_at(eye, line.look_at, Vec3::UnitZ());
}

Trajectory make_trajectory(const TrajectorySpec& spec, int frame_count) {
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(frame_count));
  for (int i = 0; i < frame_count; ++i) traj.push_back({i, trajectory_pose(spec, i, frame_count)});
  return traj;
}

Intrinsics intrinsics_from_fov(int width, int height, double horizontal_fov_deg) {
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = 0.5 * width / std::tan(0.5 * horizontal_fov_deg * std::numbers::pi / 180.0);
  k.fy = k.fx;
  k.cx = 0.5 * width;
  k.cy = 0.5 * height;
  return k;
}

Dataset generate_sequence(const SceneField& field, const SynthOptions& opts) {
  if (opts.frames < 2) throw InvalidArgument("generate_sequence: need at least 2 frames");
  if (opts.depth_noise_std < 0.0) throw InvalidArgument("generate_sequence: negative noise std");
  opts.intrinsics.validate();
  Dataset data;
  data.intrinsics = opts.intrinsics;
  data.rate_hz = opts.rate_hz;
  data.groundtruth = make_trajectory(opts.trajectory, opts.frames);
  for (int i = 0; i < opts.frames; ++i) {
    RgbdFrame frame = render_frame(field, data.groundtruth[i].pose, opts.intrinsics, opts.render, i);
    if (opts.depth_noise_std > 0.0) {
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(i)));
      std::normal_distribution<double> noise(0.0, opts.depth_noise_std);
      for (std::size_t p = 0; p < frame.pixel_count(); ++p) {
        if (!frame.valid[p]) continue;
        frame.depth[p] = static_cast<float>(std::max(0.0, frame.depth[p] + noise(rng)));
      }
      frame.refresh_valid();
    }
    data.frames.push_back(std::move(frame));
  }
  return data;
}

}  // namespace sdftrack
