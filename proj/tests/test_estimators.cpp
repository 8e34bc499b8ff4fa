#include <cmath>
#include <set>

#include "doctest.h"
#include "projfree/estimators.hpp"

using namespace projfree;

namespace {

/// Per-coordinate 3-standard-error check of a Monte Carlo mean.
void check_unbiased(const Estimator& est, const Vector& truth, int trials,
                    std::uint64_t seed) {
  const std::size_t d = truth.dim();
  Vector sum(d), sum_sq(d);
  RngStream base(seed, 77);
  for (int k = 0; k < trials; ++k) {
    RngStream rng = base.child(k);
    OracleCounters c;
    const Vector g = est(rng, c);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += g[j];
      sum_sq[j] += g[j] * g[j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / trials;
    const double var = std::max(0.0, sum_sq[j] / trials - mean * mean);
    const double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - truth[j]) <= 3 * se + 1e-12);
  }
}

struct Fixture {
  ConstraintSet set = ConstraintSet::l1_ball(5, 1.0);
  FiniteSumProblem p =
      generate_synthetic(ProblemKind::kIndefiniteQuadratic, 32, 5, 9, set);
  RngStream rng{31, 1};
};

}  // namespace

TEST_CASE("minibatch_grad") {
  const auto set = ConstraintSet::simplex(4);
  const auto p = StochasticProblem::synthetic(ProblemKind::kSigmoidLoss, 4, 5, set);
  const Vector x{0.1, 0.2, 0.3, 0.4};

  RngStream a(1, 1), b(1, 1);
  OracleCounters ca, cb;
  CHECK(minibatch_grad(p, x, 1, a, ca) == sample_grad(p, x, b, cb));
  CHECK(ca.sfo == 1);

  OracleCounters c;
  minibatch_grad(p, x, 16, a, c);
  CHECK(c.sfo == 16);
  CHECK_THROWS_AS(minibatch_grad(p, x, 0, a, c), ArgumentError);

  const SigmoidTerm term{Vector{0.6, 0.8, 0, 0}, -1.0};
  const auto fixed = StochasticProblem::deterministic(ProblemKind::kSigmoidLoss, term, set);
  CHECK(distance(minibatch_grad(fixed, x, 7, a, c), component_gradient(term, x)) <= 1e-16);
}

TEST_CASE("svrg_grad") {
  Fixture f;
  const Vector snap = f.set.sample_point(f.rng);
  OracleCounters c;
  const Vector snap_grad = full_grad(f.p, snap, c);

  SUBCASE("cancels at the snapshot") {
    OracleCounters k;
    CHECK(svrg_grad(f.p, snap, snap, snap_grad, 8, f.rng, k) == snap_grad);
    CHECK(k.ifo == 16);
  }

  SUBCASE("single component") {
    const auto one = generate_synthetic(ProblemKind::kSigmoidLoss, 1, 5, 2, f.set);
    const Vector x = f.set.sample_point(f.rng);
    OracleCounters k;
    const Vector g1 = full_grad(one, snap, k);
    CHECK(distance(svrg_grad(one, x, snap, g1, 3, f.rng, k),
                   component_gradient(one.term(0), x)) <= 1e-15);
  }

  SUBCASE("unbiased") {
    const Vector x = f.set.sample_point(f.rng);
    OracleCounters k;
    const Vector truth = full_grad(f.p, x, k);
    check_unbiased([&](RngStream& r, OracleCounters& cc) {
      return svrg_grad(f.p, x, snap, snap_grad, 4, r, cc);
    }, truth, 5000, 3);
  }
}

TEST_CASE("saga estimator and table") {
  Fixture f;
  const Vector x0 = f.set.initial_point();
  OracleCounters c;
  SagaState state(f.p, x0, c);
  CHECK(c.ifo == 32);
  CHECK(state.average() == full_grad(f.p, x0, c));

  SUBCASE("fresh table cancels at x0") {
    OracleCounters k;
    const auto est = saga_grad(f.p, x0, state, 6, f.rng, k);
    CHECK(est.gradient == state.average());
    CHECK(est.indices.size() == 6);
    CHECK(k.ifo == 6);
  }

  SUBCASE("single component") {
    const auto one = generate_synthetic(ProblemKind::kSigmoidLoss, 1, 5, 2, f.set);
    OracleCounters k;
    SagaState s1(one, x0, k);
    const Vector x = f.set.sample_point(f.rng);
    CHECK(distance(saga_grad(one, x, s1, 1, f.rng, k).gradient,
                   component_gradient(one.term(0), x)) <= 1e-15);
  }

  SUBCASE("update keeps the average consistent") {
    for (int t = 0; t < 50; ++t) {
      const Vector x = f.set.sample_point(f.rng);
      OracleCounters k;
      const auto distinct = saga_update(f.p, x, state, 8, f.rng, k);
      CHECK(k.ifo == distinct.size());
      CHECK(std::set<std::size_t>(distinct.begin(), distinct.end()).size() == distinct.size());
      CHECK(state.drift() <= 1e-10);
      for (std::size_t j : distinct) CHECK(state.entry(j) == component_gradient(f.p.term(j), x));
    }
  }

  SUBCASE("full refresh equals the full gradient") {
    const Vector x = f.set.sample_point(f.rng);
    OracleCounters k;
    const auto distinct = saga_update(f.p, x, state, 2000, f.rng, k);
    CHECK(distinct.size() == 32);
    CHECK(distance(state.average(), full_grad(f.p, x, k)) <= 1e-10);
  }

  SUBCASE("refreshing at the cached point is a no-op") {
    const Vector before = state.average();
    OracleCounters k;
    saga_update(f.p, x0, state, 5, f.rng, k);
    CHECK(distance(state.average(), before) <= 1e-15);
  }

  SUBCASE("unbiased after warm-up") {
    for (int t = 0; t < 20; ++t) {
      OracleCounters k;
      saga_update(f.p, f.set.sample_point(f.rng), state, 4, f.rng, k);
    }
    const Vector x = f.set.sample_point(f.rng);
    OracleCounters k;
    const Vector truth = full_grad(f.p, x, k);
    check_unbiased([&](RngStream& r, OracleCounters& cc) {
      return saga_grad(f.p, x, state, 3, r, cc).gradient;
    }, truth, 5000, 4);
  }
}

TEST_CASE("saga drift stays bounded over long runs") {
  const auto set = ConstraintSet::box(3, -1.0, 1.0);
  const auto p = generate_synthetic(ProblemKind::kSigmoidLoss, 16, 3, 5, set);
  RngStream rng(8, 8);
  OracleCounters c;
  SagaState state(p, set.initial_point(), c);
  for (int t = 0; t < 10000; ++t) {
    saga_update(p, set.sample_point(rng), state, 2, rng, c);
    if (t % 997 == 0) CHECK(state.drift() <= 1e-8);
  }
  CHECK(state.drift() <= 1e-8);
}

TEST_CASE("measure_estimator_error") {
  Fixture f;
  const Vector snap = f.set.sample_point(f.rng);
  OracleCounters c;
  const Vector g = full_grad(f.p, snap, c);
  const auto err = measure_estimator_error(
      [&](RngStream& r, OracleCounters& cc) { return svrg_grad(f.p, snap, snap, g, 4, r, cc); },
      g, 100, f.rng);
  CHECK(err.mean_error == 0.0);
  CHECK(err.mean_squared_error == 0.0);
  CHECK_THROWS_AS(measure_estimator_error(
                      [&](RngStream&, OracleCounters&) { return g; }, g, 99, f.rng),
                  ArgumentError);
}
