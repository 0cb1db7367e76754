#include "sdftrack/bench_grid.hpp"

#include <fstream>
#include <sstream>

#include "sdftrack/dataset_io.hpp"
#include "sdftrack/error.hpp"
#include "sdftrack/scene_file.hpp"

namespace sdftrack {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw InvalidArgument("empty list '" + s + "'");
  return out;
}

std::vector<double> real_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item, key));
  return out;
}

std::vector<int> int_list(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (double v : real_list(s, key)) {
    if (v != static_cast<int>(v) || v < 1) throw InvalidArgument("'" + key + "' needs positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Vec3 vec3_value(const std::string& s, const std::string& key) {
  const auto v = real_list(s, key);
  if (v.size() != 3) throw InvalidArgument("'" + key + "' needs three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string vec3_text(const Vec3& v) {
  return format_double(v.x()) + "," + format_double(v.y()) + "," + format_double(v.z());
}

OrbitSpec& orbit(BenchGrid& g) {
  if (!std::holds_alternative<OrbitSpec>(g.synth.trajectory)) g.synth.trajectory = OrbitSpec{};
  return std::get<OrbitSpec>(g.synth.trajectory);
}

LineSpec& line(BenchGrid& g) {
  if (!std::holds_alternative<LineSpec>(g.synth.trajectory)) g.synth.trajectory = LineSpec{};
  return std::get<LineSpec>(g.synth.trajectory);
}

void apply_grid_entry(BenchGrid& g, const std::string& key, const std::string& value) {
  if (key == "methods") {
    g.methods.clear();
    for (const auto& m : split_list(value)) g.methods.push_back(parse_method(m));
  } else if (key == "budgets") {
    g.budgets = real_list(value, key);
  } else if (key == "sdf_n" || key == "n") {
    g.sdf_n = int_list(value, key);
  } else if (key == "vr_n_pixels") {
    g.vr_n_pixels = int_list(value, key);
  } else if (key == "frames") {
    g.synth.frames = int_list(value, key).at(0);
  } else if (key == "width") {
    g.synth.intrinsics.width = int_list(value, key).at(0);
  } else if (key == "height") {
    g.synth.intrinsics.height = int_list(value, key).at(0);
  } else if (key == "fov_deg") {
    g.horizontal_fov_deg = parse_double(value, key);
  } else if (key == "scene_name") {
    g.scene_name = value;
  } else if (key == "traj") {
    if (value == "orbit") orbit(g);
    else if (value == "line") line(g);
    else throw InvalidArgument("traj must be orbit|line");
  } else if (key == "orbit_center") {
    orbit(g).center = vec3_value(value, key);
  } else if (key == "orbit_radius") {
    orbit(g).radius = parse_double(value, key);
  } else if (key == "orbit_height") {
    orbit(g).height = parse_double(value, key);
  } else if (key == "degrees_per_frame") {
    orbit(g).degrees_per_frame = parse_double(value, key);
  } else if (key == "line_start") {
    line(g).start = vec3_value(value, key);
  } else if (key == "line_end") {
    line(g).end = vec3_value(value, key);
  } else if (key == "look_at") {
    line(g).look_at = vec3_value(value, key);
  } else if (key == "noise_std") {
    g.synth.depth_noise_std = parse_double(value, key);
  } else if (key == "render_t_far") {
    g.synth.render.t_far = parse_double(value, key);
  } else if (key == "render_hit_eps") {
    g.synth.render.hit_eps = parse_double(value, key);
  } else if (key == "budget_mode") {
    g.budget_mode = parse_budget_mode(value);
    apply_config_entry(g.base, key, value);
  } else if (key == "seed") {
    apply_config_entry(g.base, key, value);
    g.synth.seed = g.base.seed;
  } else if (key == "rate_hz") {
    apply_config_entry(g.base, key, value);
    g.synth.rate_hz = g.base.rate_hz;
  } else {
    apply_config_entry(g.base, key, value);
  }
}

std::string run_name(const TrackingRun& run) {
  std::string budget = budget_label(run.config.budget);
  for (auto& c : budget)
    if (c == ':') c = '_';
  const int n = run.method == Method::sdf ? run.config.n : run.config.vr.n_pixels;
  return std::string(to_string(run.method)) + "_n" + std::to_string(n) + "_" + budget;
}

}  // namespace

BenchGrid parse_bench_grid(std::istream& in, const std::string& source_name) {
  BenchGrid g;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (trim(text).empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_grid_entry(g, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::out_of_range& e) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": missing value");
    }
  }
  g.synth.intrinsics = intrinsics_from_fov(g.synth.intrinsics.width, g.synth.intrinsics.height, g.horizontal_fov_deg);
  g.base.tracker.budget.mode = g.budget_mode;
  return g;
}

BenchGrid load_bench_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file " + path.string());
  return parse_bench_grid(in, path.string());
}

std::string format_bench_grid(const BenchGrid& g) {
  std::ostringstream os;
  std::vector<std::string> items;
  for (auto m : g.methods) items.push_back(to_string(m));
  os << "methods = " << join(items) << "\n";
  items.clear();
  for (double b : g.budgets) items.push_back(format_double(b));
  os << "budgets = " << join(items) << "\n";
  items.clear();
  for (int n : g.sdf_n) items.push_back(std::to_string(n));
  os << "sdf_n = " << join(items) << "\n";
  items.clear();
  for (int n : g.vr_n_pixels) items.push_back(std::to_string(n));
  os << "vr_n_pixels = " << join(items) << "\n";
  os << "scene_name = " << g.scene_name << "\n";
  os << "frames = " << g.synth.frames << "\n";
  os << "width = " << g.synth.intrinsics.width << "\n";
  os << "height = " << g.synth.intrinsics.height << "\n";
  os << "fov_deg = " << format_double(g.horizontal_fov_deg) << "\n";
  if (const auto* o = std::get_if<OrbitSpec>(&g.synth.trajectory)) {
    os << "traj = orbit\n";
    os << "orbit_center = " << vec3_text(o->center) << "\n";
    os << "orbit_radius = " << format_double(o->radius) << "\n";
    os << "orbit_height = " << format_double(o->height) << "\n";
    os << "degrees_per_frame = " << format_double(o->degrees_per_frame) << "\n";
  } else {
    const auto& l = std::get<LineSpec>(g.synth.trajectory);
    os << "traj = line\n";
    os << "line_start = " << vec3_text(l.start) << "\n";
    os << "line_end = " << vec3_text(l.end) << "\n";
    os << "look_at = " << vec3_text(l.look_at) << "\n";
  }
  os << "noise_std = " << format_double(g.synth.depth_noise_std) << "\n";
  os << "render_t_far = " << format_double(g.synth.render.t_far) << "\n";
  os << "render_hit_eps = " << format_double(g.synth.render.hit_eps) << "\n";
  // Tracker settings; per-cell keys (method, n, vr_n_pixels, budget_value, paths) are set by the grid.
  std::istringstream base(format_run_config(g.base));
  std::string line;
  while (std::getline(base, line)) {
    const std::string key = trim(line.substr(0, line.find('=')));
    if (key == "method" || key == "dataset" || key == "out" || key == "stats" || key == "n" ||
        key == "vr_n_pixels" || key == "budget_value")
      continue;
    os << line << "\n";
  }
  return os.str();
}

BenchResult run_bench(const std::filesystem::path& scene_file, const BenchGrid& grid,
                      const std::filesystem::path& out_dir) {
  const SceneDescription scene = load_scene(scene_file);
  const FieldPtr field = scene.build_field();
  std::filesystem::create_directories(out_dir / "runs");
  write_text_file(out_dir / "grid_resolved.txt", format_bench_grid(grid));

  const Dataset generated = generate_sequence(*field, grid.synth);
  write_dataset(out_dir / "dataset", generated, scene_file);
  const Dataset data = read_dataset(out_dir / "dataset");

  BenchResult result;
  std::vector<CompareEntry> entries;
  for (double budget : grid.budgets) {
    for (Method method : grid.methods) {
      const auto& counts = method == Method::sdf ? grid.sdf_n : grid.vr_n_pixels;
      for (int n : counts) {
        TrackerConfig cfg = grid.base.tracker;
        cfg.budget = {grid.budget_mode, budget};
        if (method == Method::sdf) cfg.n = n;
        else cfg.vr.n_pixels = n;
        field->reset_counters();
        TrackingRun run = track_sequence(*field, data, method, cfg, grid.base.seed);
        write_tum(out_dir / "runs" / (run_name(run) + ".tum"), run.trajectory(), data.rate_hz);
        entries.push_back({grid.scene_name, budget_label(cfg.budget), to_string(method), n,
                           ate_rmse(run.trajectory(), data.groundtruth, grid.base.failure_threshold)});
        result.runs.push_back(std::move(run));
      }
    }
  }
  result.comparison = compare_report(entries);
  result.iterations = iteration_report(result.runs);
  const bool timing = grid.budget_mode == BudgetMode::wall_clock_ms;
  write_text_file(out_dir / "ate.csv", compare_report_csv(result.comparison));
  write_text_file(out_dir / "iterations.csv", iteration_report_csv(result.iterations, timing));
  return result;
}

}  // namespace sdftrack
