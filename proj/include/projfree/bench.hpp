#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "projfree/solvers.hpp"

namespace projfree {

/// Configuration rejected by the bench layer. `exit_code` is 2 for usage
/// errors (unknown names, malformed values) and 3 for well-formed but
/// infeasible configurations.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

inline constexpr int kUsageError = 2;
inline constexpr int kInfeasibleError = 3;

std::optional<ProblemKind> parse_problem(std::string_view name) noexcept;
/// "simplex", "l1:<r>" or "box:<lo>:<hi>" in dimension d.
ConstraintSet parse_set(std::string_view spec, std::size_t d);

/// One fully specified benchmark run. Data is generated from config.seed.
struct RunSpec {
  RunConfig config;
  ProblemKind problem = ProblemKind::kSigmoidLoss;
  std::string set = "simplex";
  std::size_t d = 0;
  std::size_t n = 100;
  /// Explicit-beta mode; L and D default to the problem's and set's values.
  bool explicit_beta = false;
  std::optional<double> L, D, delta, beta;
  /// Rejects sagafw batch sizes larger than n.
  bool strict = false;
  /// Writes wall time into elapsed_ms; otherwise the column is 0 so that
  /// output is reproducible byte for byte.
  bool timing = false;
};

/// Builds set and problem, validates, dispatches. Throws ConfigError.
RunRecord execute(const RunSpec& spec);

/// Closed-form oracle-count predictions checked against the record.
bool verify_accounting(const RunRecord& rec, const RunConfig& cfg,
                       std::size_t n);

/// OLS slope of log(gap) against log(x); gaps sharing an x are averaged
/// first. Needs two distinct x values and positive gaps.
double fit_rate(std::span<const std::pair<double, double>> points);

const std::string& csv_header();
std::string csv_row(const RunSpec& spec, const RunRecord& rec);

enum class SweepAxis { kT, kN };

struct SweepSpec {
  SweepAxis axis = SweepAxis::kT;
  std::vector<std::size_t> values;
  std::size_t repeats = 1;
  RunSpec base;
};

struct SweepResult {
  std::vector<RunSpec> specs;
  std::vector<RunRecord> records;  // ordered by (axis value, seed)
  std::optional<double> slope;
  std::string csv;
};

/// Runs every (value, seed) pair on up to `workers` threads. Seeds are
/// base.seed + r for r < repeats. Output does not depend on `workers`.
SweepResult run_sweep(const SweepSpec& sweep, std::size_t workers = 1);

struct CheckReport {
  bool passed = true;
  std::string text;
};

/// Accounting and invariant smoke suite behind `projfree check`.
CheckReport self_check();

}  // namespace projfree
