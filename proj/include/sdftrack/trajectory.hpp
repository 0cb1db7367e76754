#pragma once

#include <optional>
#include <vector>

#include "sdftrack/frame.hpp"
#include "sdftrack/geometry.hpp"

namespace sdftrack {

struct TrajectoryEntry {
  int frame_index = 0;
  Pose pose;
};

/// Poses ordered by strictly increasing frame index.
using Trajectory = std::vector<TrajectoryEntry>;

/// Throws InvalidArgument when frame indices are not strictly increasing.
void validate_trajectory(const Trajectory& traj);

/// An RGB-D sequence with intrinsics and (at least) the initial true pose.
struct Dataset {
  Intrinsics intrinsics;
  std::vector<RgbdFrame> frames;
  Trajectory groundtruth;
  double rate_hz = 10.0;
};

}  // namespace sdftrack
