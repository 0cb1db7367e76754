#pragma once

#include <cstdint>
#include <vector>

#include "sdftrack/config.hpp"
#include "sdftrack/random.hpp"
#include "sdftrack/scene_field.hpp"
#include "sdftrack/trajectory.hpp"

namespace sdftrack {

struct FrameResult {
  int frame_index = 0;
  Pose pose;
  int iterations = 0;
  std::uint64_t queries = 0;
  double elapsed_ms = 0.0;
  double final_loss = 0.0;
  bool skipped = false;  // no valid pixels, pose carried forward
};

struct TrackingRun {
  Method method = Method::sdf;
  TrackerConfig config;
  double rate_hz = 10.0;
  std::vector<FrameResult> frames;

  Trajectory trajectory() const;
};

/// Optimizes one frame's pose starting from `init`, with a fresh Adam state.
///
/// Each iteration draws new pixel samples, evaluates the method's loss and
/// takes one Adam step. In fixed_iterations mode the loop runs exactly
/// `budget.iterations()` times; in wall-clock mode it stops once the running
/// mean iteration time exceeds the remaining budget (the first iteration
/// always runs). The last iterate is returned.
FrameResult track_frame(const SceneField& field, const Pose& init, const RgbdFrame& frame, const Intrinsics& k,
                        Method method, const TrackerConfig& cfg, Rng& rng);

/// Tracks every frame in order. Frame 0 starts from the first ground-truth
/// pose; each later frame starts from the previous estimate. No other
/// ground truth is read.
TrackingRun track_sequence(const SceneField& field, const Dataset& dataset, Method method, const TrackerConfig& cfg,
                           std::uint64_t seed);

}  // namespace sdftrack
