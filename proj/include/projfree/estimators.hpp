#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "projfree/core.hpp"
#include "projfree/problems.hpp"

namespace projfree {

/// (1/b) sum of b fresh sample gradients; b SFO calls.
Vector minibatch_grad(const StochasticProblem& p, const Vector& x,
                      std::size_t b, RngStream& rng, OracleCounters& counters);

/// Snapshot-corrected estimate
///   (1/b) sum_{i in I} (grad f_i(x) - grad f_i(snapshot) + snapshot_grad)
/// with I drawn with replacement. Costs 2b IFO calls; duplicates are
/// recomputed.
Vector svrg_grad(const FiniteSumProblem& p, const Vector& x,
                 const Vector& snapshot, const Vector& snapshot_grad,
                 std::size_t b, RngStream& rng, OracleCounters& counters);

struct SagaEstimate {
  Vector gradient;
  std::vector<std::size_t> indices;
};

/// Gradient table for the table-averaged estimator. Entry i caches
/// grad f_i at the point where index i was last refreshed; `average()` is
/// the running mean of the table.
class SagaState {
 public:
  /// Fills every entry with grad f_i(x0): n IFO calls.
  SagaState(const FiniteSumProblem& p, const Vector& x0,
            OracleCounters& counters);

  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  const Vector& average() const noexcept { return average_; }
  Vector entry(std::size_t i) const;

  /// Max-abs difference between the running average and the table mean.
  double drift() const;
  /// Recomputes the running average from the table.
  void resynchronize();

  /// Updates between exact re-syncs of the running average.
  static constexpr std::size_t kResyncInterval = 10000;

 private:
  friend std::vector<std::size_t> saga_update(const FiniteSumProblem&,
                                              const Vector&, SagaState&,
                                              std::size_t, RngStream&,
                                              OracleCounters&);
  friend SagaEstimate saga_grad(const FiniteSumProblem&, const Vector&,
                                const SagaState&, std::size_t, RngStream&,
                                OracleCounters&);

  Vector table_mean() const;

  std::size_t n_;
  std::size_t dim_;
  std::vector<double> table_;  // n x dim, row-major
  Vector average_;
  std::size_t updates_since_sync_ = 0;
};

/// (1/b) sum_{i in I} (grad f_i(x) - table[i] + average); b IFO calls.
SagaEstimate saga_grad(const FiniteSumProblem& p, const Vector& x,
                       const SagaState& state, std::size_t b, RngStream& rng,
                       OracleCounters& counters);

/// Draws J (b indices with replacement) and refreshes each distinct j to
/// grad f_j(x), keeping the running average consistent. Costs |distinct J|
/// IFO calls. Returns the distinct indices, ascending.
std::vector<std::size_t> saga_update(const FiniteSumProblem& p,
                                     const Vector& x, SagaState& state,
                                     std::size_t b, RngStream& rng,
                                     OracleCounters& counters);

using Estimator = std::function<Vector(RngStream&, OracleCounters&)>;

struct EstimatorError {
  double mean_error = 0.0;
  double mean_squared_error = 0.0;
};

/// Monte Carlo E||est - reference|| and E||est - reference||^2. Trial k
/// draws from base.child(k). Requires trials >= 100.
EstimatorError measure_estimator_error(const Estimator& estimator,
                                       const Vector& reference,
                                       std::size_t trials,
                                       const RngStream& base);

}  // namespace projfree
