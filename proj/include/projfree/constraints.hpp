#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "projfree/core.hpp"

namespace projfree {

struct Simplex {
  std::size_t dim;
};

struct L1Ball {
  std::size_t dim;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// Compact convex domain with a linear maximization oracle.
///
/// Argmax ties go to the lowest coordinate index; on a box, coordinates
/// with a zero direction component take the upper bound.
class ConstraintSet {
 public:
  static ConstraintSet simplex(std::size_t dim);
  static ConstraintSet l1_ball(std::size_t dim, double radius);
  static ConstraintSet box(Vector lower, Vector upper);
  static ConstraintSet box(std::size_t dim, double lower, double upper);

  std::size_t dim() const noexcept;
  const std::variant<Simplex, L1Ball, Box>& shape() const noexcept {
    return shape_;
  }

  /// argmax over the set of <v, direction>; always an extreme point.
  Vector lmo(const Vector& direction) const;
  /// Exact Euclidean diameter.
  double diameter() const noexcept;
  bool contains(const Vector& x, double tol) const;
  Vector initial_point() const;
  /// Largest Euclidean norm of a feasible point.
  double max_norm() const noexcept;

  /// Exhaustive search over extreme points (dim <= 12), same tie-break as
  /// lmo. Test oracle.
  Vector brute_force_lmo(const Vector& direction) const;
  /// Extreme points in enumeration order. Throws for dim > 12.
  std::vector<Vector> extreme_points() const;

  /// Random feasible point: a random convex combination of extreme points
  /// (uniform per coordinate for boxes).
  Vector sample_point(RngStream& rng) const;

  std::string describe() const;

 private:
  explicit ConstraintSet(std::variant<Simplex, L1Ball, Box> shape)
      : shape_(std::move(shape)) {}

  std::variant<Simplex, L1Ball, Box> shape_;
};

inline constexpr std::size_t kMaxEnumerationDim = 12;

}  // namespace projfree
