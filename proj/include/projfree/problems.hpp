#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "projfree/constraints.hpp"
#include "projfree/core.hpp"

namespace projfree {

enum class ProblemKind { kSigmoidLoss, kIndefiniteQuadratic, kConvexQuadratic };

std::string_view to_string(ProblemKind kind) noexcept;

/// Closed-form extremes of the logistic sigmoid s(t) = 1 / (1 + exp(-t)).
namespace sigmoid {
/// max_t s'(t), attained at t = 0.
inline constexpr double kMaxSlope = 0.25;
/// max_t |s''(t)| = 1 / (6 sqrt 3).
inline constexpr double kMaxCurvature = 0.096225044864937627;
double value(double t) noexcept;
}  // namespace sigmoid

/// f(x) = s(label * <a, x>)
struct SigmoidTerm {
  Vector a;
  double label = 1.0;
};

/// f(x) = 1/2 x^T A x + <linear, x>, A symmetric, row-major.
struct QuadraticTerm {
  std::vector<double> matrix;
  Vector linear;
  double spectral_norm = 0.0;
};

/// f(x) = 1/2 ||x - center||^2
struct CenterTerm {
  Vector center;
};

using Component = std::variant<SigmoidTerm, QuadraticTerm, CenterTerm>;

double component_value(const Component& term, const Vector& x);
Vector component_gradient(const Component& term, const Vector& x);
/// Lipschitz constant of the component's gradient.
double component_smoothness(const Component& term);

/// F(x) = (1/n) sum_i f_i(x).
class FiniteSumProblem {
 public:
  FiniteSumProblem(ProblemKind kind, std::size_t dim,
                   std::vector<Component> terms);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return terms_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  /// Every f_i is L-smooth with this L.
  double smoothness() const noexcept { return smoothness_; }
  const Component& term(std::size_t i) const { return terms_.at(i); }

  /// Uncounted objective value; used for logging only.
  double value(const Vector& x) const;

 private:
  ProblemKind kind_;
  std::size_t dim_;
  std::vector<Component> terms_;
  double smoothness_ = 0.0;
};

/// One IFO call: gradient of f_i at x (0-based i).
Vector grad_component(const FiniteSumProblem& p, std::size_t i,
                      const Vector& x, OracleCounters& counters,
                      Accounting mode = Accounting::kAlgorithm);

/// n IFO calls: (1/n) sum_i grad f_i(x).
Vector full_grad(const FiniteSumProblem& p, const Vector& x,
                 OracleCounters& counters,
                 Accounting mode = Accounting::kAlgorithm);

/// Deterministic dataset keyed by seed. Sigmoid features are unit-norm with
/// labels from a planted direction (10% flipped, so each label is +-1 with
/// probability 1/2). Quadratic Hessians are Q diag(lambda) Q^T with lambda
/// uniform in [-1, 1] and Q Haar-random. Convex-quadratic centers are random
/// feasible points of `domain`.
FiniteSumProblem generate_synthetic(ProblemKind kind, std::size_t n,
                                    std::size_t dim, std::uint64_t seed,
                                    const ConstraintSet& domain);

/// F(x) = E_z f(x, z) with z drawn by a generator distribution.
class StochasticProblem {
 public:
  /// Fresh samples follow the same law as generate_synthetic's components.
  static StochasticProblem synthetic(ProblemKind kind, std::size_t dim,
                                     std::uint64_t seed,
                                     const ConstraintSet& domain);
  /// Zero-variance distribution: every draw returns `term`.
  static StochasticProblem deterministic(ProblemKind kind, Component term,
                                         const ConstraintSet& domain);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double smoothness() const noexcept { return smoothness_; }
  /// Almost-sure bound on ||grad f(x, z)|| over the domain.
  double gradient_bound() const noexcept { return gradient_bound_; }
  bool is_deterministic() const noexcept { return fixed_.has_value(); }

  Component draw(RngStream& rng) const;
  /// Materializes F_hat = (1/count) sum f(., z_k) over `count` fresh draws.
  FiniteSumProblem draw_finite_sum(RngStream& rng, std::size_t count) const;

 private:
  StochasticProblem(ProblemKind kind, std::size_t dim, const ConstraintSet& domain)
      : kind_(kind), dim_(dim), domain_(domain) {}

  ProblemKind kind_;
  std::size_t dim_;
  ConstraintSet domain_;
  double smoothness_ = 0.0;
  double gradient_bound_ = 0.0;
  Vector planted_direction_;   // sigmoid
  QuadraticTerm planted_quadratic_;  // indefinite quadratic
  std::optional<Component> fixed_;
};

/// One SFO call: grad f(x, z) for a fresh z.
Vector sample_grad(const StochasticProblem& p, const Vector& x, RngStream& rng,
                   OracleCounters& counters);

/// Worst central-difference error over coordinates, relative to
/// max(1, ||grad F(x)||). Uncounted.
double fd_gradient_check(const FiniteSumProblem& p, const Vector& x, double h);
double fd_gradient_check(const Component& term, const Vector& x, double h);

}  // namespace projfree
