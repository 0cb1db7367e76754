#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "sdftrack/geometry.hpp"

namespace sdftrack {

/// Color in [0,1]^3 and signed distance (meters, negative inside).
struct FieldSample {
  Vec3 color = Vec3::Zero();
  double sdf = 0.0;
  /// Set by grid fields when the query point was clamped into the volume.
  bool out_of_bounds = false;
};

struct FieldDifferential {
  FieldSample sample;
  Vec3 sdf_gradient = Vec3::Zero();
  /// d(color)/d(point); zero for piecewise-constant color rules.
  Mat3 color_jacobian = Mat3::Zero();
};

/// A queryable (color, signed distance) map with spatial derivatives.
///
/// The virtual `evaluate*` functions are the raw, uncounted evaluation
/// paths used when composing fields. The non-virtual `query*` functions are
/// what trackers and renderers call; every call bumps an atomic counter so
/// per-iteration query costs can be reported exactly.
class SceneField {
 public:
  SceneField() = default;
  SceneField(const SceneField&) = delete;
  SceneField& operator=(const SceneField&) = delete;
  virtual ~SceneField() = default;

  virtual double signed_distance(const Vec3& p) const = 0;
  virtual FieldSample evaluate(const Vec3& p) const = 0;
  virtual FieldDifferential evaluate_with_derivatives(const Vec3& p) const = 0;

  FieldSample query(const Vec3& p) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return evaluate(p);
  }
  Vec3 gradient(const Vec3& p) const {
    gradients_.fetch_add(1, std::memory_order_relaxed);
    return evaluate_with_derivatives(p).sdf_gradient;
  }
  /// One query plus one gradient evaluation.
  FieldDifferential query_with_derivatives(const Vec3& p) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    gradients_.fetch_add(1, std::memory_order_relaxed);
    return evaluate_with_derivatives(p);
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }
  std::uint64_t gradient_count() const { return gradients_.load(std::memory_order_relaxed); }
  void reset_counters() const {
    queries_.store(0);
    gradients_.store(0);
  }

 private:
  mutable std::atomic<std::uint64_t> queries_{0};
  mutable std::atomic<std::uint64_t> gradients_{0};
};

using FieldPtr = std::shared_ptr<const SceneField>;

// ---------------------------------------------------------------------------
// Analytic primitives

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
};

/// Points p with normal . p == offset; positive on the side the normal points to.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};

double sphere_sdf(const Sphere& s, const Vec3& p);
double box_sdf(const Box& b, const Vec3& p);
double plane_sdf(const Plane& pl, const Vec3& p);
Vec3 sphere_gradient(const Sphere& s, const Vec3& p);
Vec3 box_gradient(const Box& b, const Vec3& p);

struct ConstantColor {
  Vec3 rgb = Vec3::Constant(0.5);
};

/// Alternating cells of side `period`.
struct CheckerColor {
  Vec3 rgb_a = Vec3::Zero();
  Vec3 rgb_b = Vec3::Ones();
  double period = 1.0;
};

/// Smooth sinusoidal blend a + (b - a) (1 + sin(2 pi <p, direction> / period)) / 2.
struct WaveColor {
  Vec3 rgb_a = Vec3::Zero();
  Vec3 rgb_b = Vec3::Ones();
  Vec3 direction = Vec3::UnitX();
  double period = 1.0;
};

using ColorRule = std::variant<ConstantColor, CheckerColor, WaveColor>;
using Shape = std::variant<Sphere, Box, Plane>;

class Primitive final : public SceneField {
 public:
  /// Throws InvalidArgument on non-positive radius/extents/period or a non-unit normal.
  Primitive(Shape shape, ColorRule color);

  const Shape& shape() const { return shape_; }
  const ColorRule& color_rule() const { return color_; }

  double signed_distance(const Vec3& p) const override;
  FieldSample evaluate(const Vec3& p) const override;
  FieldDifferential evaluate_with_derivatives(const Vec3& p) const override;

 private:
  Shape shape_;
  ColorRule color_;
  // Tangent basis for planes, so checkers live on the plane itself.
  Vec3 tangent_u_ = Vec3::UnitX();
  Vec3 tangent_v_ = Vec3::UnitY();

  Vec3 color_at(const Vec3& p, Mat3* jacobian) const;
};

/// CSG union: minimum distance, color and gradient from the closest child,
/// ties resolved to the lowest child index.
class UnionField final : public SceneField {
 public:
  /// Throws InvalidArgument when `children` is empty.
  explicit UnionField(std::vector<FieldPtr> children);

  const std::vector<FieldPtr>& children() const { return children_; }
  std::size_t closest_child(const Vec3& p) const;

  double signed_distance(const Vec3& p) const override;
  FieldSample evaluate(const Vec3& p) const override;
  FieldDifferential evaluate_with_derivatives(const Vec3& p) const override;

 private:
  std::vector<FieldPtr> children_;
};

FieldPtr make_union(std::vector<FieldPtr> children);

// ---------------------------------------------------------------------------
// Baked lattice field

struct GridBounds {
  Vec3 min = Vec3::Constant(-1.0);
  Vec3 max = Vec3::Constant(1.0);
};

/// Trilinearly interpolated lattice of sdf and color values. Queries
/// outside the bounds are clamped to the boundary and flagged.
class GridField final : public SceneField {
 public:
  /// `dims` are nodes per axis (each >= 2); values are x-fastest.
  GridField(Vec3 origin, Vec3 spacing, std::array<int, 3> dims, std::vector<double> sdf,
            std::vector<Vec3> color);

  const Vec3& origin() const { return origin_; }
  const Vec3& spacing() const { return spacing_; }
  const std::array<int, 3>& dims() const { return dims_; }
  Vec3 node_position(int i, int j, int k) const;
  double node_sdf(int i, int j, int k) const { return sdf_[index(i, j, k)]; }
  const Vec3& node_color(int i, int j, int k) const { return color_[index(i, j, k)]; }

  double signed_distance(const Vec3& p) const override;
  FieldSample evaluate(const Vec3& p) const override;
  FieldDifferential evaluate_with_derivatives(const Vec3& p) const override;

 private:
  Vec3 origin_;
  Vec3 spacing_;
  std::array<int, 3> dims_;
  std::vector<double> sdf_;
  std::vector<Vec3> color_;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(k));
  }
  FieldDifferential interpolate(const Vec3& p, bool derivatives) const;
};

/// Samples `field` at every lattice node. Throws ResolutionTooLow when any
/// axis has fewer than 2 nodes and InvalidArgument for degenerate bounds.
std::shared_ptr<GridField> bake_grid(const SceneField& field, const GridBounds& bounds,
                                     std::array<int, 3> resolution);

// ---------------------------------------------------------------------------
// SDF -> density adapter for the volume-rendering baseline

struct DensityParams {
  double alpha = 200.0;  // peak density, 1/m
  double s = 0.02;       // transition scale, m

  void validate() const;
};

/// alpha * logistic(-d / s).
double density_from_sdf(double d, const DensityParams& params);
/// d(density)/d(d).
double density_derivative(double d, const DensityParams& params);

}  // namespace sdftrack
