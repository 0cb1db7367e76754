#include "sdftrack/scene_file.hpp"

#include <fstream>
#include <sstream>

#include "sdftrack/error.hpp"

namespace sdftrack {

namespace {

class LineReader {
 public:
  LineReader(std::istringstream& in, const std::string& source, int line)
      : in_(in), source_(source), line_(line) {}

  double number(const char* what) {
    double v = 0.0;
    if (!(in_ >> v)) fail(std::string("expected number for ") + what);
    return v;
  }
  int integer(const char* what) {
    int v = 0;
    if (!(in_ >> v)) fail(std::string("expected integer for ") + what);
    return v;
  }
  Vec3 vec3(const char* what) {
    const double a = number(what);
    const double b = number(what);
    const double c = number(what);
    return {a, b, c};
  }
  std::string word(const char* what) {
    std::string w;
    if (!(in_ >> w)) fail(std::string("expected ") + what);
    return w;
  }
  void expect_end() {
    std::string rest;
    if (in_ >> rest) fail("unexpected trailing token '" + rest + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ":" << line_ << ": " << msg;
    throw ParseError(os.str());
  }

 private:
  std::istringstream& in_;
  const std::string& source_;
  int line_;
};

ColorRule parse_color(LineReader& r) {
  const std::string kind = r.word("color rule (color|checker|wave)");
  if (kind == "color") return ConstantColor{r.vec3("rgb")};
  if (kind == "checker") {
    CheckerColor c;
    c.rgb_a = r.vec3("rgb_a");
    c.rgb_b = r.vec3("rgb_b");
    c.period = r.number("period");
    return c;
  }
  if (kind == "wave") {
    WaveColor c;
    c.rgb_a = r.vec3("rgb_a");
    c.rgb_b = r.vec3("rgb_b");
    c.direction = r.vec3("direction");
    c.period = r.number("period");
    return c;
  }
  r.fail("unknown color rule '" + kind + "'");
}

}  // namespace

FieldPtr SceneDescription::build_field() const {
  if (primitives.empty()) throw InvalidArgument("scene has no primitives");
  std::vector<FieldPtr> children(primitives.begin(), primitives.end());
  auto field = make_union(std::move(children));
  if (grid_bounds) return bake_grid(*field, *grid_bounds, grid_resolution);
  return field;
}

SceneDescription parse_scene(std::istream& in, const std::string& source_name) {
  SceneDescription scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    LineReader r(ls, source_name, line_no);
    try {
      if (kind == "sphere") {
        Sphere s{r.vec3("center"), r.number("radius")};
        scene.primitives.push_back(std::make_shared<Primitive>(s, parse_color(r)));
      } else if (kind == "box") {
        Box b;
        b.center = r.vec3("center");
        b.half_extents = r.vec3("half extents");
        scene.primitives.push_back(std::make_shared<Primitive>(b, parse_color(r)));
      } else if (kind == "plane") {
        Plane pl;
        pl.normal = r.vec3("normal");
        pl.offset = r.number("offset");
        const double n = pl.normal.norm();
        if (!(n > 0.0)) r.fail("plane normal is zero");
        pl.normal /= n;
        pl.offset /= n;
        scene.primitives.push_back(std::make_shared<Primitive>(pl, parse_color(r)));
      } else if (kind == "grid") {
        GridBounds b{r.vec3("grid min"), r.vec3("grid max")};
        scene.grid_bounds = b;
        for (int a = 0; a < 3; ++a) scene.grid_resolution[a] = r.integer("grid resolution");
      } else {
        r.fail("unknown primitive '" + kind + "'");
      }
      r.expect_end();
    } catch (const InvalidArgument& e) {
      r.fail(e.what());
    }
  }
  if (scene.primitives.empty()) throw ParseError(source_name + ": scene contains no primitives");
  return scene;
}

SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file " + path.string());
  return parse_scene(in, path.string());
}

}  // namespace sdftrack
