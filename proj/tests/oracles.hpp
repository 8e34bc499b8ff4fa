#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "projfree/constraints.hpp"
#include "projfree/problems.hpp"

namespace projfree::oracle {

/// Golden-section maximization of a unimodal f on [lo, hi].
inline double maximize_1d(const std::function<double(double)>& f, double lo,
                          double hi, int iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  for (int k = 0; k < iterations; ++k) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return f(0.5 * (a + b));
}

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// max_t s'(t), with s' from a central difference of s.
inline double max_sigmoid_slope() {
  const double h = 1e-5;
  return maximize_1d(
      [&](double t) { return (logistic(t + h) - logistic(t - h)) / (2 * h); },
      -5.0, 5.0);
}

/// max_t |s''(t)|; |s''| is even, so search t >= 0 where it is unimodal.
inline double max_sigmoid_curvature() {
  return maximize_1d(
      [](double t) {
        const double s = logistic(t);
        return std::abs(s * (1 - s) * (1 - 2 * s));
      },
      0.0, 5.0);
}

/// min F over simplex(3) on a grid of spacing `step`.
inline double grid_min_simplex3(const FiniteSumProblem& p, double step) {
  const int k = static_cast<int>(std::lround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; i + j <= k; ++j) {
      const Vector x{i * step, j * step, std::max(0.0, 1.0 - (i + j) * step)};
      best = std::min(best, p.value(x));
    }
  }
  return best;
}

/// Frank-Wolfe gap by enumerating the set's extreme points.
inline double enumerated_gap(const ConstraintSet& set, const Vector& x,
                             const Vector& grad) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : set.extreme_points()) {
    double value = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) value -= (v[i] - x[i]) * grad[i];
    best = std::max(best, value);
  }
  return best;
}

}  // namespace projfree::oracle
