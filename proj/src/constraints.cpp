#include "projfree/constraints.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace projfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_dim(const ConstraintSet& set, const Vector& v, const char* what) {
  if (v.dim() != set.dim()) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(set.dim()) + ", got " +
                         std::to_string(v.dim()));
  }
}

/// Dirichlet(1, ..., 1) weights via normalized exponentials.
std::vector<double> flat_dirichlet(RngStream& rng, std::size_t k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (double& wi : w) {
    wi = -std::log1p(-rng.uniform());
    total += wi;
  }
  for (double& wi : w) wi /= total;
  return w;
}

}  // namespace

ConstraintSet ConstraintSet::simplex(std::size_t dim) {
  if (dim == 0) throw ArgumentError("simplex: dimension must be positive");
  return ConstraintSet(Simplex{dim});
}

ConstraintSet ConstraintSet::l1_ball(std::size_t dim, double radius) {
  if (dim == 0) throw ArgumentError("l1_ball: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ArgumentError("l1_ball: radius must be positive and finite");
  }
  return ConstraintSet(L1Ball{dim, radius});
}

ConstraintSet ConstraintSet::box(Vector lower, Vector upper) {
  if (lower.dim() == 0) throw ArgumentError("box: dimension must be positive");
  if (lower.dim() != upper.dim()) {
    throw DimensionError("box: bound dimensions differ");
  }
  for (std::size_t i = 0; i < lower.dim(); ++i) {
    if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) ||
        !std::isfinite(upper[i])) {
      throw ArgumentError("box: need finite lower < upper in every coordinate");
    }
  }
  return ConstraintSet(Box{std::move(lower), std::move(upper)});
}

ConstraintSet ConstraintSet::box(std::size_t dim, double lower, double upper) {
  return box(Vector(dim, lower), Vector(dim, upper));
}

std::size_t ConstraintSet::dim() const noexcept {
  return std::visit(overloaded{[](const Simplex& s) { return s.dim; },
                               [](const L1Ball& b) { return b.dim; },
                               [](const Box& b) { return b.lower.dim(); }},
                    shape_);
}

Vector ConstraintSet::lmo(const Vector& direction) const {
  require_dim(*this, direction, "lmo");
  const std::size_t d = dim();
  return std::visit(
      overloaded{
          [&](const Simplex&) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < d; ++i) {
              if (direction[i] > direction[best]) best = i;
            }
            return Vector::basis(d, best);
          },
          [&](const L1Ball& ball) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < d; ++i) {
              if (std::abs(direction[i]) > std::abs(direction[best])) best = i;
            }
            Vector v(d);
            v[best] = direction[best] < 0.0 ? -ball.radius : ball.radius;
            return v;
          },
          [&](const Box& box) {
            Vector v(d);
            for (std::size_t i = 0; i < d; ++i) {
              v[i] = direction[i] < 0.0 ? box.lower[i] : box.upper[i];
            }
            return v;
          }},
      shape_);
}

double ConstraintSet::diameter() const noexcept {
  return std::visit(
      overloaded{[](const Simplex& s) {
                   return s.dim >= 2 ? std::numbers::sqrt2 : 0.0;
                 },
                 [](const L1Ball& b) { return 2.0 * b.radius; },
                 [](const Box& b) { return distance(b.upper, b.lower); }},
      shape_);
}

bool ConstraintSet::contains(const Vector& x, double tol) const {
  if (x.dim() != dim() || !x.all_finite()) return false;
  return std::visit(
      overloaded{[&](const Simplex&) {
                   double total = 0.0;
                   for (double c : x) {
                     if (c < -tol) return false;
                     total += c;
                   }
                   return std::abs(total - 1.0) <= tol;
                 },
                 [&](const L1Ball& ball) {
                   double total = 0.0;
                   for (double c : x) total += std::abs(c);
                   return total <= ball.radius + tol;
                 },
                 [&](const Box& box) {
                   for (std::size_t i = 0; i < x.dim(); ++i) {
                     if (x[i] < box.lower[i] - tol || x[i] > box.upper[i] + tol)
                       return false;
                   }
                   return true;
                 }},
      shape_);
}

Vector ConstraintSet::initial_point() const {
  return std::visit(
      overloaded{[](const Simplex& s) { return Vector::basis(s.dim, 0); },
                 [](const L1Ball& b) { return Vector(b.dim); },
                 [](const Box& b) { return b.lower; }},
      shape_);
}

double ConstraintSet::max_norm() const noexcept {
  return std::visit(overloaded{[](const Simplex&) { return 1.0; },
                               [](const L1Ball& b) { return b.radius; },
                               [](const Box& b) {
                                 double sq = 0.0;
                                 for (std::size_t i = 0; i < b.lower.dim();
                                      ++i) {
                                   const double m = std::max(
                                       std::abs(b.lower[i]),
                                       std::abs(b.upper[i]));
                                   sq += m * m;
                                 }
                                 return std::sqrt(sq);
                               }},
                    shape_);
}

std::vector<Vector> ConstraintSet::extreme_points() const {
  const std::size_t d = dim();
  if (d > kMaxEnumerationDim) {
    throw ArgumentError("extreme_points: dimension too large to enumerate");
  }
  std::vector<Vector> points;
  std::visit(overloaded{[&](const Simplex&) {
                          for (std::size_t i = 0; i < d; ++i)
                            points.push_back(Vector::basis(d, i));
                        },
                        [&](const L1Ball& ball) {
                          for (std::size_t i = 0; i < d; ++i) {
                            points.push_back(ball.radius * Vector::basis(d, i));
                            points.push_back(-ball.radius *
                                             Vector::basis(d, i));
                          }
                        },
                        [&](const Box& box) {
                          // Bit i clear selects the upper bound, so the
                          // upper corner is enumerated first.
                          const std::size_t count = std::size_t{1} << d;
                          for (std::size_t mask = 0; mask < count; ++mask) {
                            Vector v(d);
                            for (std::size_t i = 0; i < d; ++i) {
                              v[i] = (mask >> i) & 1U ? box.lower[i]
                                                      : box.upper[i];
                            }
                            points.push_back(std::move(v));
                          }
                        }},
             shape_);
  return points;
}

Vector ConstraintSet::brute_force_lmo(const Vector& direction) const {
  require_dim(*this, direction, "brute_force_lmo");
  const auto points = extreme_points();
  std::size_t best = 0;
  double best_value = dot(points[0], direction);
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double value = dot(points[k], direction);
    if (value > best_value) {
      best = k;
      best_value = value;
    }
  }
  return points[best];
}

Vector ConstraintSet::sample_point(RngStream& rng) const {
  const std::size_t d = dim();
  return std::visit(
      overloaded{[&](const Simplex&) { return Vector(flat_dirichlet(rng, d)); },
                 [&](const L1Ball& ball) {
                   const auto w = flat_dirichlet(rng, 2 * d);
                   Vector x(d);
                   for (std::size_t i = 0; i < d; ++i) {
                     x[i] = ball.radius * (w[2 * i] - w[2 * i + 1]);
                   }
                   return x;
                 },
                 [&](const Box& box) {
                   Vector x(d);
                   for (std::size_t i = 0; i < d; ++i) {
                     x[i] = box.lower[i] +
                            rng.uniform() * (box.upper[i] - box.lower[i]);
                   }
                   return x;
                 }},
      shape_);
}

std::string ConstraintSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{[&](const Simplex&) { os << "simplex"; },
                        [&](const L1Ball& b) { os << "l1:" << b.radius; },
                        [&](const Box& b) {
                          os << "box:" << b.lower[0] << ':' << b.upper[0];
                        }},
             shape_);
  return os.str();
}

}  // namespace projfree
