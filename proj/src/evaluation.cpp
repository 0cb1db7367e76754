#include "sdftrack/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "sdftrack/error.hpp"

namespace sdftrack {

void validate_trajectory(const Trajectory& traj) {
  for (std::size_t i = 1; i < traj.size(); ++i)
    if (traj[i].frame_index <= traj[i - 1].frame_index)
      throw InvalidArgument("trajectory frame indices must be strictly increasing");
}

AteReport ate_rmse(const Trajectory& est, const Trajectory& gt, double failure_threshold) {
  validate_trajectory(est);
  validate_trajectory(gt);
  if (est.size() != gt.size()) {
    std::ostringstream os;
    os << "estimate has " << est.size() << " frames, ground truth has " << gt.size();
    throw FrameMismatch(os.str());
  }
  AteReport r;
  r.threshold = failure_threshold;
  if (est.empty()) throw FrameMismatch("trajectories are empty");
  double sum_sq = 0.0;
  double sum_rot = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (est[i].frame_index != gt[i].frame_index) {
      std::ostringstream os;
      os << "frame index mismatch at position " << i << ": " << est[i].frame_index << " vs " << gt[i].frame_index;
      throw FrameMismatch(os.str());
    }
    const double e = (est[i].pose.t - gt[i].pose.t).norm();
    r.frame_indices.push_back(est[i].frame_index);
    r.errors.push_back(e);
    r.max_error = std::max(r.max_error, e);
    sum_sq += e * e;
    sum_rot += geodesic_rotation_error(est[i].pose.q, gt[i].pose.q);
  }
  const double m = static_cast<double>(est.size());
  r.ate_rmse = std::sqrt(sum_sq / m);
  r.mean_rotation_error = sum_rot / m;
  r.failed = r.ate_rmse > failure_threshold;
  return r;
}

std::string budget_label(const Budget& b) {
  std::ostringstream os;
  if (b.mode == BudgetMode::fixed_iterations) os << "iters:" << b.iterations();
  else os << "ms:" << b.value;
  return os.str();
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<IterationRow> iteration_report(std::span<const TrackingRun> runs) {
  std::vector<IterationRow> rows;
  for (const auto& run : runs) {
    IterationRow row;
    row.method = to_string(run.method);
    row.n = run.method == Method::sdf ? run.config.n : run.config.vr.n_pixels;
    row.budget = budget_label(run.config.budget);
    double iterations = 0.0, queries = 0.0, ms = 0.0;
    for (const auto& f : run.frames) {
      iterations += f.iterations;
      queries += static_cast<double>(f.queries);
      ms += f.elapsed_ms;
    }
    if (!run.frames.empty()) row.mean_iterations = iterations / static_cast<double>(run.frames.size());
    if (iterations > 0.0) {
      row.queries_per_iteration = queries / iterations;
      row.ms_per_iteration = ms / iterations;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string iteration_report_csv(std::span<const IterationRow> rows, bool include_timing) {
  std::ostringstream os;
  os << "method,n,budget,mean_iterations,queries_per_iteration" << (include_timing ? ",ms_per_iteration" : "")
     << "\n";
  for (const auto& r : rows) {
    os << r.method << "," << r.n << "," << r.budget << "," << fixed(r.mean_iterations, 3) << ","
       << fixed(r.queries_per_iteration, 1);
    if (include_timing) os << "," << fixed(r.ms_per_iteration, 3);
    os << "\n";
  }
  return os.str();
}

std::vector<CompareRow> compare_report(std::span<const CompareEntry> entries) {
  std::vector<CompareRow> rows;
  rows.reserve(entries.size());
  std::map<std::pair<std::string, std::string>, std::size_t> best_in_cell;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    rows.push_back({entries[i], false});
    const auto key = std::make_pair(entries[i].scene, entries[i].budget);
    auto it = best_in_cell.find(key);
    if (it == best_in_cell.end()) best_in_cell.emplace(key, i);
    else if (entries[i].report.ate_rmse < entries[it->second].report.ate_rmse) it->second = i;
  }
  for (const auto& [key, idx] : best_in_cell) rows[idx].best = true;
  return rows;
}

std::string compare_report_csv(std::span<const CompareRow> rows) {
  std::ostringstream os;
  os << "scene,budget,method,n,ate_rmse,max_error,mean_rot_err_rad,failed,best\n";
  for (const auto& row : rows) {
    const auto& e = row.entry;
    os << e.scene << "," << e.budget << "," << e.method << "," << e.n << "," << fixed(e.report.ate_rmse, 9) << ","
       << fixed(e.report.max_error, 9) << "," << fixed(e.report.mean_rotation_error, 9) << ","
       << (e.report.failed ? 1 : 0) << "," << (row.best ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string ate_report_csv(const AteReport& r) {
  std::ostringstream os;
  os << "frames,ate_rmse,max_error,mean_rot_err_rad,threshold,failed\n";
  os << r.errors.size() << "," << fixed(r.ate_rmse, 9) << "," << fixed(r.max_error, 9) << ","
     << fixed(r.mean_rotation_error, 9) << "," << fixed(r.threshold, 6) << "," << (r.failed ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace sdftrack
