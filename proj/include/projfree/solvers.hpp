#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "projfree/constraints.hpp"
#include "projfree/core.hpp"
#include "projfree/problems.hpp"

namespace projfree {

enum class Algorithm { kFw, kSfw, kSvfw, kSagafw, kSvfwS, kSagafwS };

/// CLI spelling: fw, sfw, svfw, sagafw, svfw-s, sagafw-s.
std::string_view to_string(Algorithm algo) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;
bool is_stochastic(Algorithm algo) noexcept;

/// Known constants for the step-size formulas: beta, L, D and
/// delta = F(x0) - F(x*).
struct ExplicitConstants {
  double beta = 1.0;
  double smoothness = 1.0;
  double diameter = 1.0;
  double delta = 1.0;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kFw;
  std::size_t T = 1;
  std::optional<std::size_t> m;  // epoch length; default ceil(n^(1/3))
  std::optional<std::size_t> b;  // minibatch size; per-algorithm default
  std::optional<std::size_t> B;  // pre-sample size; default T
  std::optional<double> gamma;
  /// Unset: beta is eliminated and the step sizes are constant-free.
  std::optional<ExplicitConstants> explicit_constants;
  std::uint64_t seed = 0;
  std::size_t gap_every = 10;
  std::size_t eval_batch = 4096;
  /// FW only: gamma_t = 2 / (t + 2) instead of a constant step.
  bool convex_schedule = false;
};

struct LogEntry {
  std::size_t step = 0;
  long epoch = -1;
  double gap = 0.0;
  double objective = 0.0;
};

struct RunRecord {
  Algorithm algorithm = Algorithm::kFw;
  std::size_t n = 0;  // components of the (materialized) finite sum; 0 if none
  std::size_t d = 0;
  std::size_t T = 0;
  std::size_t iterations = 0;  // inner iterations actually executed
  std::size_t m = 0;
  std::size_t b = 0;
  std::size_t B = 0;
  std::size_t epochs = 0;
  double gamma = 0.0;  // 0 when a step schedule is used

  std::vector<LogEntry> log;
  std::size_t output_index = 0;
  Vector output;
  Vector final_iterate;
  double mean_gap = 0.0;
  double final_gap = 0.0;
  double output_gap = 0.0;

  OracleCounters counters;
  /// Wrappers: B pre-samples plus every inner IFO call.
  std::uint64_t sfo_equivalent = 0;
  double elapsed_ms = 0.0;
  std::vector<std::string> warnings;
};

struct RunHooks {
  /// Called with every iterate x_t (t = 0 .. iterations-1) before it moves.
  std::function<void(std::size_t, const Vector&)> on_iterate;
};

struct GapValue {
  double gap = 0.0;
  double objective = 0.0;
};

/// Frank-Wolfe gap max_{v in set} <v - x, -grad F(x)> with the exact
/// gradient. Charged to gap_ifo (n) and gap_lo (1).
GapValue fw_gap(const FiniteSumProblem& p, const ConstraintSet& set,
                const Vector& x, OracleCounters& counters);

/// Same, with grad F estimated on eval_batch samples drawn from
/// (seed, gap-evaluation stream). Throws when eval_batch is zero.
GapValue fw_gap(const StochasticProblem& p, const ConstraintSet& set,
                const Vector& x, OracleCounters& counters,
                std::size_t eval_batch, std::uint64_t seed = 0);

/// 1/2 + 2 n^(3/2) / (T b^(3/2))
double theta(std::size_t b, std::size_t n, std::size_t T);

struct StepSize {
  double value = 0.0;
  bool clamped = false;
};

/// Constant step from the algorithm's convergence theorem, clamped to
/// [0, 1]. `n` and `b` only matter for sagafw.
StepSize default_gamma(const RunConfig& cfg, std::size_t n = 1,
                       std::size_t b = 1);

/// Uniform index in {0, ..., T-1}.
std::size_t select_output(RngStream& rng, std::size_t T);

/// Smallest k with k^3 >= n^p * c.
std::size_t ceil_root3(std::uint64_t n, unsigned power = 1,
                       std::uint64_t factor = 1);

RunRecord run_fw(const RunConfig& cfg, const FiniteSumProblem& p,
                 const ConstraintSet& set, const RunHooks& hooks = {});
RunRecord run_sfw(const RunConfig& cfg, const StochasticProblem& p,
                  const ConstraintSet& set, const RunHooks& hooks = {});
RunRecord run_svfw(const RunConfig& cfg, const FiniteSumProblem& p,
                   const ConstraintSet& set, const RunHooks& hooks = {});
RunRecord run_sagafw(const RunConfig& cfg, const FiniteSumProblem& p,
                     const ConstraintSet& set, const RunHooks& hooks = {});
RunRecord run_svfw_s(const RunConfig& cfg, const StochasticProblem& p,
                     const ConstraintSet& set, const RunHooks& hooks = {});
RunRecord run_sagafw_s(const RunConfig& cfg, const StochasticProblem& p,
                       const ConstraintSet& set, const RunHooks& hooks = {});

}  // namespace projfree
