#include "projfree/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "projfree/estimators.hpp"

namespace projfree {

namespace {

/// Gap of a finite sum: either the problem itself or a fixed evaluation
/// sample standing in for a stochastic objective.
class GapEvaluator {
 public:
  GapEvaluator(const FiniteSumProblem& p, const ConstraintSet& set)
      : problem_(&p), set_(&set) {}
  GapEvaluator(std::unique_ptr<FiniteSumProblem> owned, const ConstraintSet& set)
      : owned_(std::move(owned)), problem_(owned_.get()), set_(&set) {}

  static GapEvaluator for_stochastic(const StochasticProblem& p,
                                     const ConstraintSet& set,
                                     std::size_t eval_batch,
                                     std::uint64_t seed) {
    if (eval_batch == 0) {
      throw ArgumentError("fw_gap: eval_batch must be positive for stochastic problems");
    }
    RngStream rng(seed, streams::kGapEvaluation);
    return GapEvaluator(
        std::make_unique<FiniteSumProblem>(p.draw_finite_sum(rng, eval_batch)),
        set);
  }

  GapValue operator()(const Vector& x, OracleCounters& counters) const {
    const Vector g = full_grad(*problem_, x, counters, Accounting::kGapEvaluation);
    const Vector descent = -g;
    const Vector v = set_->lmo(descent);
    counters.add_linear_oracle(Accounting::kGapEvaluation);
    return {std::max(0.0, dot(v - x, descent)), problem_->value(x)};
  }

 private:
  std::unique_ptr<FiniteSumProblem> owned_;
  const FiniteSumProblem* problem_;
  const ConstraintSet* set_;
};

/// Per-run bookkeeping: gap logging, retention of the selected output
/// iterate, and the caller's observer.
class Trace {
 public:
  Trace(const RunConfig& cfg, const GapEvaluator& eval, const RunHooks& hooks,
        RunRecord& rec)
      : eval_(eval), hooks_(hooks), rec_(rec), every_(cfg.gap_every) {
    if (every_ == 0) throw ArgumentError("gap_every must be at least 1");
    if (rec.iterations == 0) throw ArgumentError("run needs at least one iteration");
    RngStream output_rng(cfg.seed, streams::kOutputSelection);
    rec_.output_index = select_output(output_rng, rec.iterations);
  }

  void visit(std::size_t t, long epoch, const Vector& x) {
    if (hooks_.on_iterate) hooks_.on_iterate(t, x);
    if (t == rec_.output_index) rec_.output = x;
    if (t % every_ == 0) {
      const GapValue gv = eval_(x, rec_.counters);
      rec_.log.push_back({t, epoch, gv.gap, gv.objective});
    }
  }

  void finish(const Vector& last) {
    rec_.final_iterate = last;
    rec_.final_gap = eval_(last, rec_.counters).gap;
    rec_.output_gap = eval_(rec_.output, rec_.counters).gap;
    double sum = 0.0;
    for (const auto& e : rec_.log) sum += e.gap;
    rec_.mean_gap = sum / static_cast<double>(rec_.log.size());
  }

 private:
  const GapEvaluator& eval_;
  const RunHooks& hooks_;
  RunRecord& rec_;
  std::size_t every_;
};

void check_common(const RunConfig& cfg, Algorithm expected) {
  if (cfg.algorithm != expected) {
    throw ArgumentError("run config algorithm does not match solver " +
                        std::string(to_string(expected)));
  }
  if (cfg.T == 0) throw ArgumentError("T must be at least 1");
  if (cfg.gamma && !(*cfg.gamma >= 0.0 && *cfg.gamma <= 1.0)) {
    throw ArgumentError("gamma must lie in [0, 1]");
  }
}

std::size_t positive(std::optional<std::size_t> value, std::size_t fallback,
                     const char* name) {
  const std::size_t v = value.value_or(fallback);
  if (v == 0) throw ArgumentError(std::string(name) + " must be at least 1");
  return v;
}

double resolve_gamma(const RunConfig& cfg, std::size_t n, std::size_t b,
                     RunRecord& rec) {
  if (cfg.gamma) return *cfg.gamma;
  const StepSize step = default_gamma(cfg, n, b);
  if (step.clamped) {
    rec.warnings.push_back("theorem step size exceeded 1 and was clamped");
  }
  return step.value;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Vector fw_move(const ConstraintSet& set, const Vector& x, const Vector& estimate,
               double gamma, OracleCounters& counters) {
  const Vector v = set.lmo(-estimate);
  counters.add_linear_oracle(Accounting::kAlgorithm);
  return convex_step(x, v, gamma);
}

/// Epoch loop shared by SVFW and its stochastic wrapper.
void svfw_loop(const RunConfig& cfg, const FiniteSumProblem& p,
               const ConstraintSet& set, const GapEvaluator& eval,
               const RunHooks& hooks, RunRecord& rec) {
  rec.epochs = (cfg.T + rec.m - 1) / rec.m;
  rec.iterations = rec.epochs * rec.m;
  Trace trace(cfg, eval, hooks, rec);
  RngStream sampling(cfg.seed, streams::kIndexSampling);

  Vector x = set.initial_point();
  for (std::size_t s = 0; s < rec.epochs; ++s) {
    const Vector snapshot = x;
    const Vector snapshot_grad = full_grad(p, snapshot, rec.counters);
    for (std::size_t t = 0; t < rec.m; ++t) {
      trace.visit(s * rec.m + t, static_cast<long>(s), x);
      const Vector est = svrg_grad(p, x, snapshot, snapshot_grad, rec.b,
                                   sampling, rec.counters);
      x = fw_move(set, x, est, rec.gamma, rec.counters);
    }
  }
  trace.finish(x);
}

void sagafw_loop(const RunConfig& cfg, const FiniteSumProblem& p,
                 const ConstraintSet& set, const GapEvaluator& eval,
                 const RunHooks& hooks, RunRecord& rec) {
  rec.iterations = cfg.T;
  Trace trace(cfg, eval, hooks, rec);
  RngStream sampling(cfg.seed, streams::kIndexSampling);

  Vector x = set.initial_point();
  SagaState state(p, x, rec.counters);
  for (std::size_t t = 0; t < cfg.T; ++t) {
    trace.visit(t, -1, x);
    const SagaEstimate est = saga_grad(p, x, state, rec.b, sampling, rec.counters);
    Vector next = fw_move(set, x, est.gradient, rec.gamma, rec.counters);
    // The table is refreshed at x_t, the point the step started from.
    saga_update(p, x, state, rec.b, sampling, rec.counters);
    x = std::move(next);
  }
  trace.finish(x);
}

RunRecord make_record(const RunConfig& cfg, std::size_t n, std::size_t d) {
  RunRecord rec;
  rec.algorithm = cfg.algorithm;
  rec.n = n;
  rec.d = d;
  rec.T = cfg.T;
  return rec;
}

/// Step size shared by both wrappers: the SVFW form, even for SAGAFW-S.
double wrapper_gamma(const RunConfig& cfg, RunRecord& rec) {
  RunConfig as_svfw = cfg;
  as_svfw.algorithm = Algorithm::kSvfw;
  return resolve_gamma(as_svfw, 1, 1, rec);
}

FiniteSumProblem presample(const RunConfig& cfg, const StochasticProblem& p,
                           RunRecord& rec) {
  if (cfg.B && *cfg.B == 0) throw ArgumentError("B must be at least 1");
  rec.B = cfg.B.value_or(cfg.T);
  RngStream rng(cfg.seed, streams::kPresample);
  FiniteSumProblem hat = p.draw_finite_sum(rng, rec.B);
  rec.counters.sfo += rec.B;
  rec.n = rec.B;
  return hat;
}

}  // namespace

std::string_view to_string(Algorithm algo) noexcept {
  switch (algo) {
    case Algorithm::kFw: return "fw";
    case Algorithm::kSfw: return "sfw";
    case Algorithm::kSvfw: return "svfw";
    case Algorithm::kSagafw: return "sagafw";
    case Algorithm::kSvfwS: return "svfw-s";
    case Algorithm::kSagafwS: return "sagafw-s";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (Algorithm a : {Algorithm::kFw, Algorithm::kSfw, Algorithm::kSvfw,
                      Algorithm::kSagafw, Algorithm::kSvfwS,
                      Algorithm::kSagafwS}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

bool is_stochastic(Algorithm algo) noexcept {
  return algo == Algorithm::kSfw || algo == Algorithm::kSvfwS ||
         algo == Algorithm::kSagafwS;
}

GapValue fw_gap(const FiniteSumProblem& p, const ConstraintSet& set,
                const Vector& x, OracleCounters& counters) {
  return GapEvaluator(p, set)(x, counters);
}

GapValue fw_gap(const StochasticProblem& p, const ConstraintSet& set,
                const Vector& x, OracleCounters& counters,
                std::size_t eval_batch, std::uint64_t seed) {
  return GapEvaluator::for_stochastic(p, set, eval_batch, seed)(x, counters);
}

double theta(std::size_t b, std::size_t n, std::size_t T) {
  if (b == 0 || n == 0 || T == 0) throw ArgumentError("theta: b, n, T must be >= 1");
  // n^(3/2) / b^(3/2) = (n/b)^(3/2)
  const double ratio = static_cast<double>(n) / static_cast<double>(b);
  return 0.5 + 2.0 * ratio * std::sqrt(ratio) / static_cast<double>(T);
}

StepSize default_gamma(const RunConfig& cfg, std::size_t n, std::size_t b) {
  if (cfg.T == 0) throw ArgumentError("default_gamma: T must be positive");
  const auto T = static_cast<double>(cfg.T);
  const bool saga = cfg.algorithm == Algorithm::kSagafw;
  const double th = saga ? theta(b, n, cfg.T) : 1.0;

  double gamma = 0.0;
  if (cfg.algorithm == Algorithm::kFw) {
    gamma = 1.0 / std::sqrt(T);
  } else if (!cfg.explicit_constants) {
    // beta = 2 (F(x0) - F(x*)) / (L D^2) cancels every unknown constant.
    gamma = cfg.algorithm == Algorithm::kSfw ? 1.0 / std::sqrt(T)
                                             : 1.0 / std::sqrt(2.0 * T * th);
  } else {
    const ExplicitConstants& k = *cfg.explicit_constants;
    if (!(k.beta > 0.0 && k.smoothness > 0.0 && k.diameter > 0.0 &&
          k.delta >= 0.0)) {
      throw ArgumentError("explicit step size needs beta, L, D > 0 and delta >= 0");
    }
    const double scale = T * k.smoothness * k.diameter * k.diameter * k.beta;
    gamma = cfg.algorithm == Algorithm::kSfw
                ? std::sqrt(2.0 * k.delta / scale)
                : std::sqrt(k.delta / (scale * th));
  }
  if (gamma > 1.0) return {1.0, true};
  return {gamma, false};
}

std::size_t select_output(RngStream& rng, std::size_t T) {
  if (T == 0) throw ArgumentError("select_output: T must be positive");
  return static_cast<std::size_t>(rng.uniform_index(T));
}

std::size_t ceil_root3(std::uint64_t n, unsigned power, std::uint64_t factor) {
  using Wide = unsigned __int128;
  Wide target = factor;
  for (unsigned k = 0; k < power; ++k) target *= n;
  auto guess = static_cast<std::uint64_t>(
      std::cbrt(static_cast<long double>(target)));
  while (guess > 0 && Wide(guess - 1) * (guess - 1) * (guess - 1) >= target) --guess;
  while (Wide(guess) * guess * guess < target) ++guess;
  return static_cast<std::size_t>(guess);
}

RunRecord run_fw(const RunConfig& cfg, const FiniteSumProblem& p,
                 const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kFw);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, p.n(), p.dim());
  rec.iterations = cfg.T;
  rec.gamma = cfg.convex_schedule ? 0.0 : resolve_gamma(cfg, p.n(), 1, rec);
  GapEvaluator eval(p, set);
  Trace trace(cfg, eval, hooks, rec);

  Vector x = set.initial_point();
  for (std::size_t t = 0; t < cfg.T; ++t) {
    trace.visit(t, -1, x);
    const double gamma =
        cfg.convex_schedule ? 2.0 / (static_cast<double>(t) + 2.0) : rec.gamma;
    x = fw_move(set, x, full_grad(p, x, rec.counters), gamma, rec.counters);
  }
  trace.finish(x);
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

RunRecord run_sfw(const RunConfig& cfg, const StochasticProblem& p,
                  const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kSfw);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, 0, p.dim());
  rec.iterations = cfg.T;
  rec.b = positive(cfg.b, cfg.T, "b");
  rec.gamma = resolve_gamma(cfg, 1, rec.b, rec);
  const auto eval = GapEvaluator::for_stochastic(p, set, cfg.eval_batch, cfg.seed);
  Trace trace(cfg, eval, hooks, rec);
  RngStream sampling(cfg.seed, streams::kIndexSampling);

  Vector x = set.initial_point();
  for (std::size_t t = 0; t < cfg.T; ++t) {
    trace.visit(t, -1, x);
    const Vector est = minibatch_grad(p, x, rec.b, sampling, rec.counters);
    x = fw_move(set, x, est, rec.gamma, rec.counters);
  }
  trace.finish(x);
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

RunRecord run_svfw(const RunConfig& cfg, const FiniteSumProblem& p,
                   const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kSvfw);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, p.n(), p.dim());
  rec.m = positive(cfg.m, ceil_root3(p.n()), "m");
  rec.b = positive(cfg.b, rec.m * rec.m, "b");
  rec.gamma = resolve_gamma(cfg, p.n(), rec.b, rec);
  GapEvaluator eval(p, set);
  svfw_loop(cfg, p, set, eval, hooks, rec);
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

RunRecord run_sagafw(const RunConfig& cfg, const FiniteSumProblem& p,
                     const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kSagafw);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, p.n(), p.dim());
  rec.b = positive(cfg.b, ceil_root3(p.n()), "b");
  rec.gamma = resolve_gamma(cfg, p.n(), rec.b, rec);
  GapEvaluator eval(p, set);
  sagafw_loop(cfg, p, set, eval, hooks, rec);
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

RunRecord run_svfw_s(const RunConfig& cfg, const StochasticProblem& p,
                     const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kSvfwS);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, 0, p.dim());
  const FiniteSumProblem hat = presample(cfg, p, rec);
  rec.m = ceil_root3(rec.B);
  rec.b = ceil_root3(rec.B, 2);
  rec.gamma = wrapper_gamma(cfg, rec);
  // Gaps are measured against the true objective, not the pre-sampled one.
  const auto eval = GapEvaluator::for_stochastic(p, set, cfg.eval_batch, cfg.seed);
  svfw_loop(cfg, hat, set, eval, hooks, rec);
  rec.sfo_equivalent = rec.counters.sfo + rec.counters.ifo;
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

RunRecord run_sagafw_s(const RunConfig& cfg, const StochasticProblem& p,
                       const ConstraintSet& set, const RunHooks& hooks) {
  check_common(cfg, Algorithm::kSagafwS);
  Stopwatch clock;
  RunRecord rec = make_record(cfg, 0, p.dim());
  const FiniteSumProblem hat = presample(cfg, p, rec);
  rec.b = ceil_root3(rec.B, 1, 27);
  rec.gamma = wrapper_gamma(cfg, rec);
  const auto eval = GapEvaluator::for_stochastic(p, set, cfg.eval_batch, cfg.seed);
  sagafw_loop(cfg, hat, set, eval, hooks, rec);
  rec.sfo_equivalent = rec.counters.sfo + rec.counters.ifo;
  rec.elapsed_ms = clock.elapsed_ms();
  return rec;
}

}  // namespace projfree
