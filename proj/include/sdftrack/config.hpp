#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "sdftrack/rendering.hpp"
#include "sdftrack/scene_field.hpp"

namespace sdftrack {

enum class Method { sdf, vr };
enum class BudgetMode { wall_clock_ms, fixed_iterations };

const char* to_string(Method m);
const char* to_string(BudgetMode m);
Method parse_method(const std::string& s);
BudgetMode parse_budget_mode(const std::string& s);

struct AdamConfig {
  double lr_position = 5e-4;
  double lr_orientation = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Volume-rendering baseline settings.
struct VrConfig {
  int n_pixels = 512;
  double lambda_photo = 5.0;
  double lambda_depth = 1.0;
  DensityParams density;
  RenderParams render;  // t_near, t_far, n_samples_per_ray, stratified are used
};

struct Budget {
  BudgetMode mode = BudgetMode::fixed_iterations;
  double value = 7.0;  // milliseconds or iterations

  int iterations() const { return static_cast<int>(value); }
};

struct TrackerConfig {
  int n = 4096;
  double lambda_sdf = 1.0;
  double lambda_color = 0.1;
  AdamConfig adam;
  VrConfig vr;
  Budget budget;

  /// Throws InvalidArgument on negative weights, n < 1, or lambda_sdf + lambda_color == 0.
  void validate() const;
};

/// Everything a `track` run needs; serialized as `key = value` lines.
struct RunConfig {
  TrackerConfig tracker;
  Method method = Method::sdf;
  double rate_hz = 10.0;  // timestamps are frame_index / rate_hz
  std::uint64_t seed = 1;
  double failure_threshold = 0.2;
  std::string dataset;
  std::string out;
  std::string stats;
};

/// Sets one key. Throws InvalidArgument for unknown keys or bad values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);
/// Parses `key = value` lines on top of `base`; `#` comments and blank lines are ignored.
RunConfig parse_run_config(std::istream& in, const std::string& source_name, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});
/// Every key with its resolved value, in a fixed order.
std::string format_run_config(const RunConfig& cfg);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& what);

}  // namespace sdftrack
