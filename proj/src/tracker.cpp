#include "sdftrack/tracker.hpp"

#include <chrono>

#include "sdftrack/adam.hpp"
#include "sdftrack/error.hpp"
#include "sdftrack/losses.hpp"
#include "sdftrack/sampling.hpp"

namespace sdftrack {

Trajectory TrackingRun::trajectory() const {
  Trajectory out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back({f.frame_index, f.pose});
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

FrameResult track_frame(const SceneField& field, const Pose& init, const RgbdFrame& frame, const Intrinsics& k,
                        Method method, const TrackerConfig& cfg, Rng& rng) {
  const auto start = Clock::now();
  FrameResult result;
  result.frame_index = frame.frame_index;
  result.pose = init;

  const std::vector<int> valid = valid_pixel_indices(frame);
  if (valid.empty()) {
    result.skipped = true;
    return result;
  }

  const bool wall_clock = cfg.budget.mode == BudgetMode::wall_clock_ms;
  const int max_iterations = wall_clock ? 0 : cfg.budget.iterations();
  AdamState adam;
  Pose pose = init;
  double iteration_ms_sum = 0.0;
  while (true) {
    if (wall_clock) {
      if (result.iterations > 0) {
        const double mean = iteration_ms_sum / result.iterations;
        if (mean > cfg.budget.value - ms_since(start)) break;
      }
    } else if (result.iterations >= max_iterations) {
      break;
    }
    const auto iteration_start = Clock::now();
    LossReport loss;
    if (method == Method::sdf) {
      const auto pixels = sample_pixels(frame, valid, cfg.n, rng);
      const auto points = build_point_set(frame, k, pixels);
      loss = sdf_loss(field, pose, points, cfg);
    } else {
      const auto pixels = sample_pixels(frame, valid, cfg.vr.n_pixels, rng);
      loss = vr_loss(field, pose, k, frame, pixels, cfg, rng);
    }
    pose = adam_step(adam, pose, loss.g_t, loss.g_q, cfg.adam);
    result.final_loss = loss.total;
    result.queries += loss.queries;
    ++result.iterations;
    iteration_ms_sum += ms_since(iteration_start);
  }
  result.pose = pose;
  result.elapsed_ms = ms_since(start);
  return result;
}

TrackingRun track_sequence(const SceneField& field, const Dataset& dataset, Method method, const TrackerConfig& cfg,
                           std::uint64_t seed) {
  cfg.validate();
  if (dataset.frames.empty()) throw InvalidArgument("track_sequence: dataset has no frames");
  if (dataset.groundtruth.empty()) throw InvalidArgument("track_sequence: dataset has no initial pose");
  TrackingRun run;
  run.method = method;
  run.config = cfg;
  run.rate_hz = dataset.rate_hz;
  Rng rng(seed);
  Pose estimate = dataset.groundtruth.front().pose;
  for (const auto& frame : dataset.frames) {
    FrameResult r = track_frame(field, estimate, frame, dataset.intrinsics, method, cfg, rng);
    estimate = r.pose;
    run.frames.push_back(r);
  }
  return run;
}

}  // namespace sdftrack
