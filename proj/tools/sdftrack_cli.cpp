// Command-line front end: synth, track, eval, bench.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sdftrack/bench_grid.hpp"
#include "sdftrack/dataset_io.hpp"
#include "sdftrack/error.hpp"
#include "sdftrack/evaluation.hpp"
#include "sdftrack/scene_file.hpp"
#include "sdftrack/synth.hpp"
#include "sdftrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace sdftrack;

namespace {

Vec3 to_vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_extension();
  return out.string() + suffix;
}

struct SynthArgs {
  std::string scene, traj = "orbit", out;
  int frames = 40, width = 64, height = 48;
  double noise_std = 0.0, fov = 60.0, rate = 10.0;
  std::uint64_t seed = 1;
  std::vector<double> orbit_center{0, 0, 0};
  double orbit_radius = 1.0, orbit_height = 0.3, degrees_per_frame = 0.25;
  std::vector<double> line_start{-0.5, -1.0, 0.3}, line_end{0.5, -1.0, 0.3}, look_at{0, 0, 0};
};

int run_synth(const SynthArgs& a) {
  const SceneDescription scene = load_scene(a.scene);
  const FieldPtr field = scene.build_field();
  SynthOptions opts;
  if (a.traj == "orbit") {
    opts.trajectory = OrbitSpec{to_vec3(a.orbit_center), a.orbit_radius, a.orbit_height, a.degrees_per_frame};
  } else {
    opts.trajectory = LineSpec{to_vec3(a.line_start), to_vec3(a.line_end), to_vec3(a.look_at)};
  }
  opts.intrinsics = intrinsics_from_fov(a.width, a.height, a.fov);
  opts.frames = a.frames;
  opts.depth_noise_std = a.noise_std;
  opts.seed = a.seed;
  opts.rate_hz = a.rate;
  const Dataset data = generate_sequence(*field, opts);
  write_dataset(a.out, data, fs::path(a.scene));
  std::cout << "wrote " << data.frames.size() << " frames to " << a.out << "\n";
  return 0;
}

struct TrackArgs {
  std::string dataset, method, config, out, stats, scene;
  std::optional<double> budget_ms;
  std::optional<int> iters;
  bool wall_clock = false;
  std::optional<std::uint64_t> seed;
};

int run_track(const TrackArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) cfg = load_run_config(a.config);
  if (!a.dataset.empty()) cfg.dataset = a.dataset;
  if (!a.method.empty()) cfg.method = parse_method(a.method);
  if (!a.out.empty()) cfg.out = a.out;
  if (!a.stats.empty()) cfg.stats = a.stats;
  if (a.seed) cfg.seed = *a.seed;
  if (a.budget_ms) cfg.tracker.budget = {BudgetMode::wall_clock_ms, *a.budget_ms};
  if (a.iters) cfg.tracker.budget = {BudgetMode::fixed_iterations, static_cast<double>(*a.iters)};
  if (cfg.dataset.empty()) throw InvalidArgument("track: no dataset given (--dataset or config 'dataset')");
  if (cfg.out.empty()) throw InvalidArgument("track: no output trajectory given (--out or config 'out')");
  if (cfg.stats.empty()) cfg.stats = sibling(cfg.out, ".stats.csv").string();
  cfg.tracker.validate();
  if (cfg.tracker.budget.mode == BudgetMode::fixed_iterations && cfg.tracker.budget.iterations() == 0)
    std::cerr << "warning: zero iterations per frame; the initial pose is propagated unchanged\n";

  const DatasetManifest manifest = read_manifest(cfg.dataset);
  const Dataset data = read_dataset(cfg.dataset);
  cfg.rate_hz = data.rate_hz;
  // One frame period per frame at the dataset's tracking rate.
  if (a.wall_clock) cfg.tracker.budget = {BudgetMode::wall_clock_ms, 1000.0 / data.rate_hz};
  if (cfg.tracker.budget.mode == BudgetMode::wall_clock_ms && !(cfg.tracker.budget.value > 0.0))
    throw InvalidArgument("track: wall-clock budget must be positive");
  fs::path scene_path = a.scene;
  if (scene_path.empty()) {
    if (manifest.scene_file.empty()) throw InvalidArgument("track: dataset has no scene; pass --scene");
    scene_path = fs::path(cfg.dataset) / manifest.scene_file;
  }
  const FieldPtr field = load_scene(scene_path).build_field();

  write_text_file(sibling(cfg.out, ".config.txt"), format_run_config(cfg));
  const TrackingRun run = track_sequence(*field, data, cfg.method, cfg.tracker, cfg.seed);
  write_tum(cfg.out, run.trajectory(), data.rate_hz);
  write_text_file(cfg.stats, frame_stats_csv(run, cfg.tracker.budget.mode == BudgetMode::wall_clock_ms));
  std::cout << "tracked " << run.frames.size() << " frames with " << to_string(cfg.method) << " -> " << cfg.out
            << "\n";
  return 0;
}

int run_eval(const std::string& est, const std::string& gt, double threshold, double rate, const std::string& csv) {
  const AteReport r = ate_rmse(read_tum(est, rate), read_tum(gt, rate), threshold);
  std::printf("ATE %.6f m (frames=%zu, max=%.6f, mean_rot=%.6f rad, failed=%d)\n", r.ate_rmse, r.errors.size(),
              r.max_error, r.mean_rotation_error, r.failed ? 1 : 0);
  if (!csv.empty()) write_text_file(csv, ate_report_csv(r));
  return 0;
}

int run_bench_cmd(const std::string& scene, const std::string& grid_file, const std::string& out) {
  const BenchGrid grid = load_bench_grid(grid_file);
  const BenchResult result = run_bench(scene, grid, out);
  std::cout << compare_report_csv(result.comparison);
  std::cout << "\n# iterations per frame and field queries per iteration (ms informational)\n";
  std::cout << iteration_report_csv(result.iterations, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RGB-D camera tracking in signed-distance scenes"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "render a synthetic RGB-D sequence");
  s->add_option("--scene", synth.scene, "scene description file")->required()->check(CLI::ExistingFile);
  s->add_option("--traj", synth.traj, "trajectory type")->check(CLI::IsMember({"orbit", "line"}));
  s->add_option("--frames", synth.frames, "frame count M")->check(CLI::Range(2, 1000000));
  s->add_option("--out", synth.out, "output dataset directory")->required();
  s->add_option("--noise-std", synth.noise_std, "depth noise std (m)")->check(CLI::NonNegativeNumber);
  s->add_option("--seed", synth.seed, "noise seed");
  s->add_option("--width", synth.width);
  s->add_option("--height", synth.height);
  s->add_option("--fov", synth.fov, "horizontal field of view (deg)");
  s->add_option("--rate", synth.rate, "tracking rate r for timestamps (Hz)");
  s->add_option("--orbit-center", synth.orbit_center)->expected(3);
  s->add_option("--orbit-radius", synth.orbit_radius);
  s->add_option("--orbit-height", synth.orbit_height);
  s->add_option("--deg-per-frame", synth.degrees_per_frame);
  s->add_option("--line-start", synth.line_start)->expected(3);
  s->add_option("--line-end", synth.line_end)->expected(3);
  s->add_option("--look-at", synth.look_at)->expected(3);

  TrackArgs track;
  auto* t = app.add_subcommand("track", "track a dataset");
  t->add_option("--dataset", track.dataset, "dataset directory");
  t->add_option("--method", track.method, "sdf or vr")->check(CLI::IsMember({"sdf", "vr"}));
  t->add_option("--config", track.config, "key = value config file")->check(CLI::ExistingFile);
  auto* budget = t->add_option("--budget-ms", track.budget_ms, "wall-clock budget per frame (ms)");
  auto* iters = t->add_option("--iters", track.iters, "fixed iterations per frame");
  auto* wall = t->add_flag("--wall-clock", track.wall_clock, "wall-clock budget of 1000/rate_hz ms per frame");
  budget->excludes(iters);
  wall->excludes(budget);
  wall->excludes(iters);
  t->add_option("--out", track.out, "estimated trajectory (TUM)");
  t->add_option("--stats", track.stats, "per-frame stats CSV");
  t->add_option("--scene", track.scene, "scene file (defaults to the dataset's)");
  t->add_option("--seed", track.seed, "sampling seed");

  std::string est, gt, csv;
  double threshold = kDefaultFailureThreshold, rate = 10.0;
  auto* e = app.add_subcommand("eval", "absolute trajectory error");
  e->add_option("--est", est)->required()->check(CLI::ExistingFile);
  e->add_option("--gt", gt)->required()->check(CLI::ExistingFile);
  e->add_option("--threshold", threshold, "failure threshold (m)");
  e->add_option("--rate", rate, "rate used to map timestamps to frame indices (Hz)");
  e->add_option("--csv", csv, "write the report as CSV");

  std::string bench_scene, grid_file, bench_out = "bench_out";
  auto* b = app.add_subcommand("bench", "method x budget benchmark grid");
  b->add_option("--scene", bench_scene)->required()->check(CLI::ExistingFile);
  b->add_option("--grid", grid_file)->required()->check(CLI::ExistingFile);
  b->add_option("--out", bench_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (*s) return run_synth(synth);
    if (*t) return run_track(track);
    if (*e) return run_eval(est, gt, threshold, rate, csv);
    if (*b) return run_bench_cmd(bench_scene, grid_file, bench_out);
  } catch (const Error& err) {
    std::cerr << "error: " << err.code() << ": " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: Internal: " << err.what() << "\n";
    return 3;
  }
  return 1;
}
