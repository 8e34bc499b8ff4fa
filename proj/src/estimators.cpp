#include "projfree/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace projfree {

Vector minibatch_grad(const StochasticProblem& p, const Vector& x,
                      std::size_t b, RngStream& rng, OracleCounters& counters) {
  if (b == 0) throw ArgumentError("minibatch_grad: batch size must be positive");
  Vector sum(p.dim());
  for (std::size_t k = 0; k < b; ++k) axpy(1.0, sample_grad(p, x, rng, counters), sum);
  return (1.0 / static_cast<double>(b)) * sum;
}

Vector svrg_grad(const FiniteSumProblem& p, const Vector& x,
                 const Vector& snapshot, const Vector& snapshot_grad,
                 std::size_t b, RngStream& rng, OracleCounters& counters) {
  if (b == 0) throw ArgumentError("svrg_grad: batch size must be positive");
  Vector sum(p.dim());
  for (std::size_t i : sample_indices(rng, p.n(), b)) {
    axpy(1.0, grad_component(p, i, x, counters), sum);
    axpy(-1.0, grad_component(p, i, snapshot, counters), sum);
  }
  // sum/b + snapshot_grad equals (1/b) sum (... + snapshot_grad) and is
  // exact when x == snapshot.
  Vector out = (1.0 / static_cast<double>(b)) * sum;
  axpy(1.0, snapshot_grad, out);
  return out;
}

SagaState::SagaState(const FiniteSumProblem& p, const Vector& x0,
                     OracleCounters& counters)
    : n_(p.n()), dim_(p.dim()), table_(p.n() * p.dim()), average_(p.dim()) {
  for (std::size_t i = 0; i < n_; ++i) {
    const Vector g = grad_component(p, i, x0, counters);
    std::copy(g.begin(), g.end(), table_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }
  average_ = table_mean();
}

Vector SagaState::entry(std::size_t i) const {
  if (i >= n_) throw ArgumentError("SagaState::entry: index out of range");
  const auto first = table_.begin() + static_cast<std::ptrdiff_t>(i * dim_);
  return Vector(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(dim_)));
}

Vector SagaState::table_mean() const {
  Vector mean(dim_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = 0; c < dim_; ++c) mean[c] += table_[i * dim_ + c];
  }
  return (1.0 / static_cast<double>(n_)) * mean;
}

double SagaState::drift() const {
  const Vector mean = table_mean();
  double worst = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    worst = std::max(worst, std::abs(mean[c] - average_[c]));
  }
  return worst;
}

void SagaState::resynchronize() {
  average_ = table_mean();
  updates_since_sync_ = 0;
}

SagaEstimate saga_grad(const FiniteSumProblem& p, const Vector& x,
                       const SagaState& state, std::size_t b, RngStream& rng,
                       OracleCounters& counters) {
  if (b == 0) throw ArgumentError("saga_grad: batch size must be positive");
  if (state.n() != p.n() || state.dim() != p.dim()) {
    throw DimensionError("saga_grad: state does not match problem");
  }
  SagaEstimate est{Vector(p.dim()), sample_indices(rng, p.n(), b)};
  for (std::size_t i : est.indices) {
    axpy(1.0, grad_component(p, i, x, counters), est.gradient);
    for (std::size_t c = 0; c < state.dim_; ++c)
      est.gradient[c] -= state.table_[i * state.dim_ + c];
  }
  est.gradient = (1.0 / static_cast<double>(b)) * est.gradient;
  axpy(1.0, state.average_, est.gradient);
  return est;
}

std::vector<std::size_t> saga_update(const FiniteSumProblem& p,
                                     const Vector& x, SagaState& state,
                                     std::size_t b, RngStream& rng,
                                     OracleCounters& counters) {
  if (b == 0) throw ArgumentError("saga_update: batch size must be positive");
  if (state.n() != p.n() || state.dim() != p.dim()) {
    throw DimensionError("saga_update: state does not match problem");
  }
  auto distinct = sample_indices(rng, p.n(), b);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  const double inv_n = 1.0 / static_cast<double>(state.n_);
  const std::size_t d = state.dim_;
  for (std::size_t j : distinct) {
    const Vector fresh = grad_component(p, j, x, counters);
    double* row = state.table_.data() + j * d;
    for (std::size_t c = 0; c < d; ++c) {
      state.average_[c] -= inv_n * (row[c] - fresh[c]);
      row[c] = fresh[c];
    }
  }
  if (++state.updates_since_sync_ >= SagaState::kResyncInterval) {
    state.resynchronize();
  }
  return distinct;
}

EstimatorError measure_estimator_error(const Estimator& estimator,
                                       const Vector& reference,
                                       std::size_t trials,
                                       const RngStream& base) {
  if (trials < 100) {
    throw ArgumentError("measure_estimator_error: need at least 100 trials");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    RngStream rng = base.child(k);
    OracleCounters scratch;
    const double err = distance(estimator(rng, scratch), reference);
    sum += err;
    sum_sq += err * err;
  }
  const auto t = static_cast<double>(trials);
  return {sum / t, sum_sq / t};
}

}  // namespace projfree
