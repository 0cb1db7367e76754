#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdftrack/config.hpp"
#include "sdftrack/evaluation.hpp"
#include "sdftrack/synth.hpp"

namespace sdftrack {

/// Method x sample-count x budget grid for the benchmark, read from
/// `key = value` lines. Any RunConfig key is accepted as a tracker
/// override; list-valued keys are comma separated.
struct BenchGrid {
  std::vector<Method> methods{Method::sdf, Method::vr};
  BudgetMode budget_mode = BudgetMode::fixed_iterations;
  std::vector<double> budgets{3.0, 7.0, 50.0};
  std::vector<int> sdf_n{4096};
  std::vector<int> vr_n_pixels{512};
  SynthOptions synth;
  double horizontal_fov_deg = 60.0;
  std::string scene_name = "scene";
  RunConfig base;
};

BenchGrid parse_bench_grid(std::istream& in, const std::string& source_name);
BenchGrid load_bench_grid(const std::filesystem::path& path);
std::string format_bench_grid(const BenchGrid& grid);

struct BenchResult {
  std::vector<TrackingRun> runs;
  std::vector<CompareRow> comparison;
  std::vector<IterationRow> iterations;
};

/// Synthesizes the sequence into `out_dir/dataset`, reads it back, tracks
/// it with every grid cell and writes `ate.csv` (method comparison),
/// `iterations.csv` (iteration/query counts), one TUM file per run under
/// `runs/` and the resolved grid. Timing columns are only written in
/// wall-clock mode so fixed-iteration outputs are byte-reproducible.
BenchResult run_bench(const std::filesystem::path& scene_file, const BenchGrid& grid,
                      const std::filesystem::path& out_dir);

}  // namespace sdftrack
