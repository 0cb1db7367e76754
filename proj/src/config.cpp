#include "sdftrack/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "sdftrack/error.hpp"

namespace sdftrack {

const char* to_string(Method m) { return m == Method::sdf ? "sdf" : "vr"; }

const char* to_string(BudgetMode m) { return m == BudgetMode::fixed_iterations ? "fixed_iterations" : "wall_clock_ms"; }

Method parse_method(const std::string& s) {
  if (s == "sdf") return Method::sdf;
  if (s == "vr") return Method::vr;
  throw InvalidArgument("unknown method '" + s + "' (expected sdf|vr)");
}

BudgetMode parse_budget_mode(const std::string& s) {
  if (s == "fixed_iterations") return BudgetMode::fixed_iterations;
  if (s == "wall_clock_ms") return BudgetMode::wall_clock_ms;
  throw InvalidArgument("unknown budget mode '" + s + "' (expected fixed_iterations|wall_clock_ms)");
}

void TrackerConfig::validate() const {
  if (n < 1) throw InvalidArgument("config: n must be >= 1");
  if (lambda_sdf < 0.0 || lambda_color < 0.0 || vr.lambda_photo < 0.0 || vr.lambda_depth < 0.0)
    throw InvalidArgument("config: loss weights must be non-negative");
  if (!(lambda_sdf + lambda_color > 0.0)) throw InvalidArgument("config: lambda_sdf + lambda_color must be positive");
  if (vr.n_pixels < 1) throw InvalidArgument("config: vr_n_pixels must be >= 1");
  if (!(adam.lr_position >= 0.0) || !(adam.lr_orientation >= 0.0)) throw InvalidArgument("config: negative learning rate");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    throw InvalidArgument("config: adam betas must lie in [0,1)");
  if (!(adam.eps > 0.0)) throw InvalidArgument("config: adam eps must be positive");
  if (!(budget.value >= 0.0)) throw InvalidArgument("config: budget value must be non-negative");
  vr.density.validate();
  vr.render.validate();
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const double mag = std::abs(v);
  const auto format = mag >= 1e-6 && mag < 1e15 ? std::chars_format::fixed : std::chars_format::scientific;
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, format);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw InvalidArgument("bad number '" + s + "' for " + what);
  return v;
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw InvalidArgument("bad integer '" + s + "' for " + what);
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidArgument("bad boolean '" + s + "' for " + what);
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

Field real(const char* key, double RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return format_double(c.*member); },
          [member, key](RunConfig& c, const std::string& v) { c.*member = parse_double(v, key); }};
}

template <class Getter>
Field real_at(const char* key, Getter ref) {
  return {key, [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); },
          [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_double(v, key); }};
}

template <class Getter>
Field integer_at(const char* key, Getter ref) {
  return {key, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref, key](RunConfig& c, const std::string& v) { ref(c) = static_cast<int>(parse_int(v, key)); }};
}

template <class Getter>
Field text_at(const char* key, Getter ref) {
  return {key, [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
          [ref](RunConfig& c, const std::string& v) { ref(c) = v; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"method", [](const RunConfig& c) { return std::string(to_string(c.method)); },
       [](RunConfig& c, const std::string& v) { c.method = parse_method(v); }},
      text_at("dataset", [](RunConfig& c) -> std::string& { return c.dataset; }),
      text_at("out", [](RunConfig& c) -> std::string& { return c.out; }),
      text_at("stats", [](RunConfig& c) -> std::string& { return c.stats; }),
      {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_int(v, "seed")); }},
      real("rate_hz", &RunConfig::rate_hz),
      real("failure_threshold", &RunConfig::failure_threshold),
      {"budget_mode", [](const RunConfig& c) { return std::string(to_string(c.tracker.budget.mode)); },
       [](RunConfig& c, const std::string& v) { c.tracker.budget.mode = parse_budget_mode(v); }},
      real_at("budget_value", [](RunConfig& c) -> double& { return c.tracker.budget.value; }),
      integer_at("n", [](RunConfig& c) -> int& { return c.tracker.n; }),
      real_at("lambda_sdf", [](RunConfig& c) -> double& { return c.tracker.lambda_sdf; }),
      real_at("lambda_color", [](RunConfig& c) -> double& { return c.tracker.lambda_color; }),
      real_at("lr_position", [](RunConfig& c) -> double& { return c.tracker.adam.lr_position; }),
      real_at("lr_orientation", [](RunConfig& c) -> double& { return c.tracker.adam.lr_orientation; }),
      real_at("adam_beta1", [](RunConfig& c) -> double& { return c.tracker.adam.beta1; }),
      real_at("adam_beta2", [](RunConfig& c) -> double& { return c.tracker.adam.beta2; }),
      real_at("adam_eps", [](RunConfig& c) -> double& { return c.tracker.adam.eps; }),
      integer_at("vr_n_pixels", [](RunConfig& c) -> int& { return c.tracker.vr.n_pixels; }),
      integer_at("vr_n_samples", [](RunConfig& c) -> int& { return c.tracker.vr.render.n_samples_per_ray; }),
      real_at("vr_lambda_photo", [](RunConfig& c) -> double& { return c.tracker.vr.lambda_photo; }),
      real_at("vr_lambda_depth", [](RunConfig& c) -> double& { return c.tracker.vr.lambda_depth; }),
      real_at("vr_t_near", [](RunConfig& c) -> double& { return c.tracker.vr.render.t_near; }),
      real_at("vr_t_far", [](RunConfig& c) -> double& { return c.tracker.vr.render.t_far; }),
      {"vr_stratified", [](const RunConfig& c) { return std::string(c.tracker.vr.render.stratified ? "true" : "false"); },
       [](RunConfig& c, const std::string& v) { c.tracker.vr.render.stratified = parse_bool(v, "vr_stratified"); }},
      real_at("density_alpha", [](RunConfig& c) -> double& { return c.tracker.vr.density.alpha; }),
      real_at("density_s", [](RunConfig& c) -> double& { return c.tracker.vr.density.s; }),
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  throw InvalidArgument("unknown config key '" + key + "'");
}

RunConfig parse_run_config(std::istream& in, const std::string& source_name, RunConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return parse_run_config(in, path, std::move(base));
}

std::string format_run_config(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& f : fields()) os << f.key << " = " << f.get(cfg) << "\n";
  return os.str();
}

}  // namespace sdftrack
