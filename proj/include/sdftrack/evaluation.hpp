#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdftrack/tracker.hpp"
#include "sdftrack/trajectory.hpp"

namespace sdftrack {

constexpr double kDefaultFailureThreshold = 0.2;  // m

struct AteReport {
  double ate_rmse = 0.0;
  std::vector<int> frame_indices;
  std::vector<double> errors;  // per-frame translation error, m
  double max_error = 0.0;
  double mean_rotation_error = 0.0;  // rad, diagnostic only
  double threshold = kDefaultFailureThreshold;
  bool failed = false;  // ate_rmse > threshold
};

/// RMS of per-frame translation errors. No alignment is applied: both
/// trajectories are assumed to share the world frame. Throws FrameMismatch
/// when the frame index sets differ.
AteReport ate_rmse(const Trajectory& est, const Trajectory& gt, double failure_threshold = kDefaultFailureThreshold);

/// "iters:7" or "ms:50".
std::string budget_label(const Budget& b);

struct IterationRow {
  std::string method;
  int n = 0;  // points (sdf) or pixels (vr) per iteration
  std::string budget;
  double mean_iterations = 0.0;         // per frame
  double queries_per_iteration = 0.0;   // field queries
  double ms_per_iteration = 0.0;        // informational, hardware-bound
};

std::vector<IterationRow> iteration_report(std::span<const TrackingRun> runs);
/// Header `method,n,budget,mean_iterations,queries_per_iteration[,ms_per_iteration]`.
std::string iteration_report_csv(std::span<const IterationRow> rows, bool include_timing);

struct CompareEntry {
  std::string scene;
  std::string budget;
  std::string method;
  int n = 0;
  AteReport report;
};

struct CompareRow {
  CompareEntry entry;
  bool best = false;  // lowest ATE within its (scene, budget) cell; ties go to the first entry
};

/// Groups entries into (scene, budget) cells, preserving input order, and
/// marks the best entry of each cell.
std::vector<CompareRow> compare_report(std::span<const CompareEntry> entries);
/// Header `scene,budget,method,n,ate_rmse,max_error,mean_rot_err_rad,failed,best`.
std::string compare_report_csv(std::span<const CompareRow> rows);

/// Header `frames,ate_rmse,max_error,mean_rot_err_rad,threshold,failed`, one row.
std::string ate_report_csv(const AteReport& r);

}  // namespace sdftrack
