#include "projfree/problems.hpp"

#include <algorithm>
#include <cmath>

namespace projfree {

namespace {

constexpr double kLabelFlipProbability = 0.1;
constexpr double kLinearTermNorm = 0.5;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Vector unit_gaussian(RngStream& rng, std::size_t dim) {
  Vector v(dim);
  double sq = 0.0;
  do {
    for (double& c : v.coords()) c = rng.normal();
    sq = dot(v, v);
  } while (sq == 0.0);
  return (1.0 / std::sqrt(sq)) * v;
}

/// Columns of a Haar-random orthogonal matrix (Gram-Schmidt on Gaussians).
std::vector<Vector> random_rotation(RngStream& rng, std::size_t dim) {
  std::vector<Vector> q;
  q.reserve(dim);
  while (q.size() < dim) {
    Vector v(dim);
    for (double& c : v.coords()) c = rng.normal();
    for (const auto& prev : q) axpy(-dot(prev, v), prev, v);
    const double len = norm(v);
    if (len < 1e-8) continue;
    q.push_back((1.0 / len) * v);
  }
  return q;
}

QuadraticTerm random_indefinite_quadratic(RngStream& rng, std::size_t dim) {
  std::vector<double> eig(dim);
  double spectral = 0.0;
  for (double& e : eig) {
    e = 2.0 * rng.uniform() - 1.0;
    spectral = std::max(spectral, std::abs(e));
  }
  const auto q = random_rotation(rng, dim);
  QuadraticTerm term;
  term.matrix.assign(dim * dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) {
      double sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) sum += q[k][r] * eig[k] * q[k][c];
      term.matrix[r * dim + c] = sum;
      term.matrix[c * dim + r] = sum;
    }
  }
  term.linear = kLinearTermNorm * unit_gaussian(rng, dim);
  term.spectral_norm = spectral;
  return term;
}

SigmoidTerm random_sigmoid(RngStream& rng, const Vector& planted) {
  SigmoidTerm term{unit_gaussian(rng, planted.dim()), 1.0};
  term.label = dot(term.a, planted) < 0.0 ? -1.0 : 1.0;
  if (rng.uniform() < kLabelFlipProbability) term.label = -term.label;
  return term;
}

double sigmoid_slope(double t) noexcept {
  const double s = sigmoid::value(t);
  return s * (1.0 - s);
}

void require_dim(std::size_t expected, const Vector& x, const char* what) {
  if (x.dim() != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(expected) + ", got " +
                         std::to_string(x.dim()));
  }
}

std::size_t component_dim(const Component& term) {
  return std::visit(
      overloaded{[](const SigmoidTerm& t) { return t.a.dim(); },
                 [](const QuadraticTerm& t) { return t.linear.dim(); },
                 [](const CenterTerm& t) { return t.center.dim(); }},
      term);
}

}  // namespace

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::kSigmoidLoss: return "sigmoid";
    case ProblemKind::kIndefiniteQuadratic: return "indefquad";
    case ProblemKind::kConvexQuadratic: return "convexquad";
  }
  return "unknown";
}

double sigmoid::value(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double component_value(const Component& term, const Vector& x) {
  require_dim(component_dim(term), x, "component_value");
  return std::visit(
      overloaded{
          [&](const SigmoidTerm& t) {
            return sigmoid::value(t.label * dot(t.a, x));
          },
          [&](const QuadraticTerm& t) {
            const std::size_t d = x.dim();
            double quad = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
              double row = 0.0;
              for (std::size_t c = 0; c < d; ++c) row += t.matrix[r * d + c] * x[c];
              quad += x[r] * row;
            }
            return 0.5 * quad + dot(t.linear, x);
          },
          [&](const CenterTerm& t) {
            const double dist = distance(x, t.center);
            return 0.5 * dist * dist;
          }},
      term);
}

Vector component_gradient(const Component& term, const Vector& x) {
  require_dim(component_dim(term), x, "component_gradient");
  return std::visit(
      overloaded{[&](const SigmoidTerm& t) {
                   const double slope = sigmoid_slope(t.label * dot(t.a, x));
                   return (slope * t.label) * t.a;
                 },
                 [&](const QuadraticTerm& t) {
                   const std::size_t d = x.dim();
                   Vector g(t.linear);
                   for (std::size_t r = 0; r < d; ++r) {
                     for (std::size_t c = 0; c < d; ++c)
                       g[r] += t.matrix[r * d + c] * x[c];
                   }
                   return g;
                 },
                 [&](const CenterTerm& t) { return x - t.center; }},
      term);
}

double component_smoothness(const Component& term) {
  return std::visit(
      overloaded{[](const SigmoidTerm& t) {
                   return dot(t.a, t.a) * sigmoid::kMaxCurvature;
                 },
                 [](const QuadraticTerm& t) { return t.spectral_norm; },
                 [](const CenterTerm&) { return 1.0; }},
      term);
}

FiniteSumProblem::FiniteSumProblem(ProblemKind kind, std::size_t dim,
                                   std::vector<Component> terms)
    : kind_(kind), dim_(dim), terms_(std::move(terms)) {
  if (terms_.empty()) throw ArgumentError("finite sum needs n >= 1 terms");
  if (dim_ == 0) throw ArgumentError("finite sum needs dimension >= 1");
  for (const auto& t : terms_) {
    if (component_dim(t) != dim_) {
      throw DimensionError("finite sum: component dimension mismatch");
    }
    smoothness_ = std::max(smoothness_, component_smoothness(t));
  }
}

double FiniteSumProblem::value(const Vector& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += component_value(t, x);
  return sum / static_cast<double>(terms_.size());
}

Vector grad_component(const FiniteSumProblem& p, std::size_t i,
                      const Vector& x, OracleCounters& counters,
                      Accounting mode) {
  if (i >= p.n()) throw ArgumentError("grad_component: index out of range");
  counters.add_gradients(1, mode);
  return component_gradient(p.term(i), x);
}

Vector full_grad(const FiniteSumProblem& p, const Vector& x,
                 OracleCounters& counters, Accounting mode) {
  Vector sum(p.dim());
  for (std::size_t i = 0; i < p.n(); ++i) {
    axpy(1.0, grad_component(p, i, x, counters, mode), sum);
  }
  return (1.0 / static_cast<double>(p.n())) * sum;
}

FiniteSumProblem generate_synthetic(ProblemKind kind, std::size_t n,
                                    std::size_t dim, std::uint64_t seed,
                                    const ConstraintSet& domain) {
  if (n == 0) throw ArgumentError("generate_synthetic: n must be positive");
  if (dim == 0) throw ArgumentError("generate_synthetic: d must be positive");
  if (domain.dim() != dim) {
    throw DimensionError("generate_synthetic: domain dimension mismatch");
  }
  auto source = StochasticProblem::synthetic(kind, dim, seed, domain);
  RngStream rng = RngStream(seed, streams::kDataGeneration).child(n);
  std::vector<Component> terms;
  terms.reserve(n);
  if (kind == ProblemKind::kIndefiniteQuadratic) {
    // Finite sums use independent Hessians, not the planted mixture.
    for (std::size_t i = 0; i < n; ++i)
      terms.emplace_back(random_indefinite_quadratic(rng, dim));
    return FiniteSumProblem(kind, dim, std::move(terms));
  }
  return source.draw_finite_sum(rng, n);
}

StochasticProblem StochasticProblem::synthetic(ProblemKind kind,
                                               std::size_t dim,
                                               std::uint64_t seed,
                                               const ConstraintSet& domain) {
  if (dim == 0 || domain.dim() != dim) {
    throw DimensionError("stochastic problem: dimension mismatch with domain");
  }
  StochasticProblem p(kind, dim, domain);
  RngStream rng(seed, streams::kDataGeneration);
  switch (kind) {
    case ProblemKind::kSigmoidLoss:
      p.planted_direction_ = unit_gaussian(rng, dim);
      p.smoothness_ = sigmoid::kMaxCurvature;
      p.gradient_bound_ = sigmoid::kMaxSlope;
      break;
    case ProblemKind::kIndefiniteQuadratic:
      p.planted_quadratic_ = random_indefinite_quadratic(rng, dim);
      p.smoothness_ = 1.0;
      p.gradient_bound_ = domain.max_norm() + kLinearTermNorm;
      break;
    case ProblemKind::kConvexQuadratic:
      p.smoothness_ = 1.0;
      p.gradient_bound_ = domain.diameter();
      break;
  }
  return p;
}

StochasticProblem StochasticProblem::deterministic(ProblemKind kind,
                                                   Component term,
                                                   const ConstraintSet& domain) {
  const std::size_t dim = component_dim(term);
  if (domain.dim() != dim) {
    throw DimensionError("stochastic problem: dimension mismatch with domain");
  }
  StochasticProblem p(kind, dim, domain);
  p.smoothness_ = component_smoothness(term);
  p.gradient_bound_ = std::visit(
      overloaded{[](const SigmoidTerm& t) { return norm(t.a) * sigmoid::kMaxSlope; },
                 [&](const QuadraticTerm& t) {
                   return t.spectral_norm * domain.max_norm() + norm(t.linear);
                 },
                 [&](const CenterTerm&) { return domain.diameter(); }},
      term);
  p.fixed_ = std::move(term);
  return p;
}

Component StochasticProblem::draw(RngStream& rng) const {
  if (fixed_) return *fixed_;
  switch (kind_) {
    case ProblemKind::kSigmoidLoss:
      return random_sigmoid(rng, planted_direction_);
    case ProblemKind::kIndefiniteQuadratic: {
      // Average of the planted term and a fresh one, so E[f] is not
      // identically zero; the spectral norm stays <= 1.
      QuadraticTerm fresh = random_indefinite_quadratic(rng, dim_);
      for (std::size_t k = 0; k < fresh.matrix.size(); ++k)
        fresh.matrix[k] = 0.5 * (fresh.matrix[k] + planted_quadratic_.matrix[k]);
      fresh.linear = 0.5 * (fresh.linear + planted_quadratic_.linear);
      fresh.spectral_norm =
          0.5 * (fresh.spectral_norm + planted_quadratic_.spectral_norm);
      return fresh;
    }
    case ProblemKind::kConvexQuadratic:
      return CenterTerm{domain_.sample_point(rng)};
  }
  throw ArgumentError("unknown problem kind");
}

FiniteSumProblem StochasticProblem::draw_finite_sum(RngStream& rng,
                                                    std::size_t count) const {
  if (count == 0) throw ArgumentError("draw_finite_sum: count must be positive");
  std::vector<Component> terms;
  terms.reserve(count);
  for (std::size_t k = 0; k < count; ++k) terms.push_back(draw(rng));
  return FiniteSumProblem(kind_, dim_, std::move(terms));
}

Vector sample_grad(const StochasticProblem& p, const Vector& x, RngStream& rng,
                   OracleCounters& counters) {
  require_dim(p.dim(), x, "sample_grad");
  counters.sfo += 1;
  return component_gradient(p.draw(rng), x);
}

namespace {

template <class Value, class Gradient>
double fd_check(const Vector& x, double h, Value value, Gradient gradient) {
  if (!(h > 0.0)) throw ArgumentError("fd_gradient_check: h must be positive");
  const Vector g = gradient(x);
  const double denom = std::max(1.0, norm(g));
  double worst = 0.0;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    Vector plus(x), minus(x);
    plus[j] += h;
    minus[j] -= h;
    const double fd = (value(plus) - value(minus)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[j]) / denom);
  }
  return worst;
}

}  // namespace

double fd_gradient_check(const FiniteSumProblem& p, const Vector& x,
                         double h) {
  return fd_check(
      x, h, [&](const Vector& y) { return p.value(y); },
      [&](const Vector& y) {
        OracleCounters scratch;
        return full_grad(p, y, scratch);
      });
}

double fd_gradient_check(const Component& term, const Vector& x, double h) {
  return fd_check(
      x, h, [&](const Vector& y) { return component_value(term, y); },
      [&](const Vector& y) { return component_gradient(term, y); });
}

}  // namespace projfree
