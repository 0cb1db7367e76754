#include "sdftrack/scene_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdftrack/error.hpp"

namespace sdftrack {

namespace {

double sign_or_one(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Clamps each channel to [0,1], zeroing Jacobian rows of saturated channels.
Vec3 clamp_color(Vec3 c, Mat3* jacobian) {
  for (int ch = 0; ch < 3; ++ch) {
    if (c[ch] < 0.0 || c[ch] > 1.0) {
      c[ch] = std::clamp(c[ch], 0.0, 1.0);
      if (jacobian) jacobian->row(ch).setZero();
    }
  }
  return c;
}

}  // namespace

double sphere_sdf(const Sphere& s, const Vec3& p) { return (p - s.center).norm() - s.radius; }

double box_sdf(const Box& b, const Vec3& p) {
  const Vec3 q = (p - b.center).cwiseAbs() - b.half_extents;
  return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
}

double plane_sdf(const Plane& pl, const Vec3& p) { return pl.normal.dot(p) - pl.offset; }

Vec3 sphere_gradient(const Sphere& s, const Vec3& p) {
  const Vec3 r = p - s.center;
  const double n = r.norm();
  if (n == 0.0) return Vec3::UnitZ();
  return r / n;
}

Vec3 box_gradient(const Box& b, const Vec3& p) {
  const Vec3 rel = p - b.center;
  const Vec3 q = rel.cwiseAbs() - b.half_extents;
  const Vec3 outside = q.cwiseMax(0.0);
  const double outside_norm = outside.norm();
  Vec3 g = Vec3::Zero();
  if (outside_norm > 0.0) {
    for (int a = 0; a < 3; ++a) g[a] = sign_or_one(rel[a]) * outside[a] / outside_norm;
    return g;
  }
  int axis = 0;
  q.maxCoeff(&axis);
  g[axis] = sign_or_one(rel[axis]);
  return g;
}

// ---------------------------------------------------------------------------

Primitive::Primitive(Shape shape, ColorRule color) : shape_(std::move(shape)), color_(std::move(color)) {
  if (const auto* s = std::get_if<Sphere>(&shape_)) {
    if (!(s->radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  } else if (const auto* b = std::get_if<Box>(&shape_)) {
    if (!(b->half_extents.minCoeff() > 0.0)) throw InvalidArgument("box half extents must be positive");
  } else {
    const auto& pl = std::get<Plane>(shape_);
    if (std::abs(pl.normal.norm() - 1.0) > 1e-9) throw InvalidArgument("plane normal must be unit length");
    const Vec3 helper = std::abs(pl.normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    tangent_u_ = pl.normal.cross(helper).normalized();
    tangent_v_ = pl.normal.cross(tangent_u_);
  }
  if (const auto* c = std::get_if<CheckerColor>(&color_)) {
    if (!(c->period > 0.0)) throw InvalidArgument("checker period must be positive");
  } else if (const auto* w = std::get_if<WaveColor>(&color_)) {
    if (!(w->period > 0.0)) throw InvalidArgument("wave period must be positive");
  }
}

double Primitive::signed_distance(const Vec3& p) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) return sphere_sdf(s, p);
        else if constexpr (std::is_same_v<T, Box>) return box_sdf(s, p);
        else return plane_sdf(s, p);
      },
      shape_);
}

Vec3 Primitive::color_at(const Vec3& p, Mat3* jacobian) const {
  const auto* plane = std::get_if<Plane>(&shape_);
  if (const auto* c = std::get_if<ConstantColor>(&color_)) {
    return clamp_color(c->rgb, nullptr);
  }
  if (const auto* c = std::get_if<CheckerColor>(&color_)) {
    long long parity = 0;
    if (plane) {
      parity = static_cast<long long>(std::floor(tangent_u_.dot(p) / c->period)) +
               static_cast<long long>(std::floor(tangent_v_.dot(p) / c->period));
    } else {
      for (int a = 0; a < 3; ++a) parity += static_cast<long long>(std::floor(p[a] / c->period));
    }
    return clamp_color((parity & 1) ? c->rgb_b : c->rgb_a, nullptr);
  }
  const auto& wave = std::get<WaveColor>(color_);
  // Planes carry their color on the surface: use the orthogonal projection.
  Vec3 x = p;
  Mat3 projection = Mat3::Identity();
  if (plane) {
    x = p - (plane->normal.dot(p) - plane->offset) * plane->normal;
    projection -= plane->normal * plane->normal.transpose();
  }
  const double omega = 2.0 * std::numbers::pi / wave.period;
  const double phase = omega * wave.direction.dot(x);
  const Vec3 delta = wave.rgb_b - wave.rgb_a;
  Vec3 c = wave.rgb_a + delta * (0.5 + 0.5 * std::sin(phase));
  if (jacobian) {
    *jacobian = (0.5 * omega * std::cos(phase)) * delta * (projection * wave.direction).transpose();
  }
  return clamp_color(c, jacobian);
}

FieldSample Primitive::evaluate(const Vec3& p) const { return {color_at(p, nullptr), signed_distance(p), false}; }

FieldDifferential Primitive::evaluate_with_derivatives(const Vec3& p) const {
  FieldDifferential out;
  out.sample.sdf = signed_distance(p);
  out.sample.color = color_at(p, &out.color_jacobian);
  out.sdf_gradient = std::visit(
      [&](const auto& s) -> Vec3 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) return sphere_gradient(s, p);
        else if constexpr (std::is_same_v<T, Box>) return box_gradient(s, p);
        else return s.normal;
      },
      shape_);
  return out;
}

// ---------------------------------------------------------------------------

UnionField::UnionField(std::vector<FieldPtr> children) : children_(std::move(children)) {
  if (children_.empty()) throw InvalidArgument("union needs at least one child");
  for (const auto& c : children_)
    if (!c) throw InvalidArgument("union child is null");
}

std::size_t UnionField::closest_child(const Vec3& p) const {
  std::size_t best = 0;
  double best_d = children_[0]->signed_distance(p);
  for (std::size_t i = 1; i < children_.size(); ++i) {
    const double d = children_[i]->signed_distance(p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double UnionField::signed_distance(const Vec3& p) const {
  double best_d = children_[0]->signed_distance(p);
  for (std::size_t i = 1; i < children_.size(); ++i) best_d = std::min(best_d, children_[i]->signed_distance(p));
  return best_d;
}

FieldSample UnionField::evaluate(const Vec3& p) const { return children_[closest_child(p)]->evaluate(p); }

FieldDifferential UnionField::evaluate_with_derivatives(const Vec3& p) const {
  return children_[closest_child(p)]->evaluate_with_derivatives(p);
}

FieldPtr make_union(std::vector<FieldPtr> children) {
  return std::make_shared<UnionField>(std::move(children));
}

// ---------------------------------------------------------------------------

GridField::GridField(Vec3 origin, Vec3 spacing, std::array<int, 3> dims, std::vector<double> sdf,
                     std::vector<Vec3> color)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), dims_(dims), sdf_(std::move(sdf)),
      color_(std::move(color)) {
  for (int a = 0; a < 3; ++a) {
    if (dims_[a] < 2) throw ResolutionTooLow("grid needs at least 2 nodes per axis");
    if (!(spacing_[a] > 0.0)) throw InvalidArgument("grid spacing must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  if (sdf_.size() != n || color_.size() != n) throw InvalidArgument("grid value count does not match dims");
}

Vec3 GridField::node_position(int i, int j, int k) const {
  return origin_ + Vec3(i * spacing_.x(), j * spacing_.y(), k * spacing_.z());
}

FieldDifferential GridField::interpolate(const Vec3& p, bool derivatives) const {
  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  bool clamped = false;
  for (int a = 0; a < 3; ++a) {
    double g = (p[a] - origin_[a]) / spacing_[a];
    const double upper = dims_[a] - 1;
    if (!(g >= 0.0)) {
      g = 0.0;
      clamped = true;
    } else if (g > upper) {
      g = upper;
      clamped = true;
    }
    // Lattice coordinates that are a rounding error away from a node are
    // snapped onto it so node queries reproduce stored values exactly.
    const double nearest = std::round(g);
    if (std::abs(g - nearest) < 1e-9) g = nearest;
    base[a] = std::min(static_cast<int>(std::floor(g)), dims_[a] - 2);
    frac[a] = g - base[a];
  }

  FieldDifferential out;
  out.sample.out_of_bounds = clamped;
  double sdf = 0.0;
  Vec3 color = Vec3::Zero();
  Vec3 dsdf = Vec3::Zero();
  Mat3 dcolor = Mat3::Zero();
  for (int corner = 0; corner < 8; ++corner) {
    const int ox = corner & 1, oy = (corner >> 1) & 1, oz = (corner >> 2) & 1;
    const double wx = ox ? frac[0] : 1.0 - frac[0];
    const double wy = oy ? frac[1] : 1.0 - frac[1];
    const double wz = oz ? frac[2] : 1.0 - frac[2];
    const std::size_t idx = index(base[0] + ox, base[1] + oy, base[2] + oz);
    const double w = wx * wy * wz;
    sdf += w * sdf_[idx];
    color += w * color_[idx];
    if (derivatives) {
      const Vec3 dw((ox ? 1.0 : -1.0) * wy * wz / spacing_.x(), (oy ? 1.0 : -1.0) * wx * wz / spacing_.y(),
                    (oz ? 1.0 : -1.0) * wx * wy / spacing_.z());
      dsdf += sdf_[idx] * dw;
      dcolor += color_[idx] * dw.transpose();
    }
  }
  out.sample.sdf = sdf;
  out.sample.color = clamp_color(color, derivatives ? &dcolor : nullptr);
  out.sdf_gradient = dsdf;
  out.color_jacobian = dcolor;
  return out;
}

double GridField::signed_distance(const Vec3& p) const { return interpolate(p, false).sample.sdf; }

FieldSample GridField::evaluate(const Vec3& p) const { return interpolate(p, false).sample; }

FieldDifferential GridField::evaluate_with_derivatives(const Vec3& p) const { return interpolate(p, true); }

std::shared_ptr<GridField> bake_grid(const SceneField& field, const GridBounds& bounds,
                                     std::array<int, 3> resolution) {
  for (int a = 0; a < 3; ++a) {
    if (resolution[a] < 2) {
      std::ostringstream os;
      os << "bake_grid: axis " << a << " has resolution " << resolution[a] << " < 2";
      throw ResolutionTooLow(os.str());
    }
    if (!(bounds.max[a] > bounds.min[a])) throw InvalidArgument("bake_grid: degenerate bounds");
  }
  const Vec3 spacing = (bounds.max - bounds.min).cwiseQuotient(
      Vec3(resolution[0] - 1, resolution[1] - 1, resolution[2] - 1));
  const std::size_t n = static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
  std::vector<double> sdf(n);
  std::vector<Vec3> color(n);
  const int nx = resolution[0], ny = resolution[1], nz = resolution[2];
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Vec3 p = bounds.min + Vec3(i * spacing.x(), j * spacing.y(), k * spacing.z());
        const FieldSample s = field.evaluate(p);
        const std::size_t idx = static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * (j + static_cast<std::size_t>(ny) * k);
        sdf[idx] = s.sdf;
        color[idx] = s.color;
      }
    }
  }
  return std::make_shared<GridField>(bounds.min, spacing, resolution, std::move(sdf), std::move(color));
}

// ---------------------------------------------------------------------------

void DensityParams::validate() const {
  if (!(alpha > 0.0) || !(s > 0.0)) throw InvalidArgument("density params: alpha and s must be positive");
}

namespace {

// Numerically stable logistic(x) = 1 / (1 + exp(-x)).
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double density_from_sdf(double d, const DensityParams& params) { return params.alpha * logistic(-d / params.s); }

double density_derivative(double d, const DensityParams& params) {
  const double l = logistic(-d / params.s);
  return -params.alpha / params.s * l * (1.0 - l);
}

}  // namespace sdftrack
