#include "projfree/bench.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

namespace projfree {

namespace {

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(kUsageError, "malformed " + std::string(what) + ": '" +
                                       std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_strict(const RunSpec& spec) {
  const RunConfig& cfg = spec.config;
  if (cfg.algorithm == Algorithm::kSagafw) {
    const std::size_t b = cfg.b.value_or(ceil_root3(spec.n));
    if (b > spec.n) {
      throw ConfigError(kInfeasibleError,
                        "strict: sagafw batch size b exceeds n");
    }
  } else if (cfg.algorithm == Algorithm::kSagafwS) {
    const std::size_t B = cfg.B.value_or(cfg.T);
    if (ceil_root3(B, 1, 27) > B) {
      throw ConfigError(kInfeasibleError,
                        "strict: sagafw-s batch size ceil(3 B^(1/3)) exceeds B");
    }
  }
}

}  // namespace

std::optional<ProblemKind> parse_problem(std::string_view name) noexcept {
  for (ProblemKind k : {ProblemKind::kSigmoidLoss, ProblemKind::kIndefiniteQuadratic,
                        ProblemKind::kConvexQuadratic}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ConstraintSet parse_set(std::string_view spec, std::size_t d) {
  const auto parts = split(spec, ':');
  try {
    if (parts.size() == 1 && parts[0] == "simplex") {
      return ConstraintSet::simplex(d);
    }
    if (parts.size() == 2 && parts[0] == "l1") {
      return ConstraintSet::l1_ball(d, parse_real(parts[1], "l1 radius"));
    }
    if (parts.size() == 3 && parts[0] == "box") {
      return ConstraintSet::box(d, parse_real(parts[1], "box lower bound"),
                                parse_real(parts[2], "box upper bound"));
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(kInfeasibleError, e.what());
  }
  throw ConfigError(kUsageError, "unknown constraint set '" + std::string(spec) +
                                     "' (expected simplex, l1:<r> or box:<lo>:<hi>)");
}

RunRecord execute(const RunSpec& spec) {
  if (spec.d == 0) throw ConfigError(kInfeasibleError, "d must be at least 1");
  if (spec.n == 0) throw ConfigError(kInfeasibleError, "n must be at least 1");
  const ConstraintSet set = parse_set(spec.set, spec.d);
  if (spec.explicit_beta && (!spec.delta || !spec.beta)) {
    throw ConfigError(kUsageError,
                      "explicit beta mode requires --delta and --beta");
  }
  if (spec.strict) check_strict(spec);

  RunConfig cfg = spec.config;
  try {
    if (is_stochastic(cfg.algorithm)) {
      const auto p = StochasticProblem::synthetic(spec.problem, spec.d,
                                                  cfg.seed, set);
      if (spec.explicit_beta) {
        cfg.explicit_constants = ExplicitConstants{
            *spec.beta, spec.L.value_or(p.smoothness()),
            spec.D.value_or(set.diameter()), *spec.delta};
      }
      switch (cfg.algorithm) {
        case Algorithm::kSfw: return run_sfw(cfg, p, set);
        case Algorithm::kSvfwS: return run_svfw_s(cfg, p, set);
        default: return run_sagafw_s(cfg, p, set);
      }
    }
    const auto p = generate_synthetic(spec.problem, spec.n, spec.d, cfg.seed, set);
    if (spec.explicit_beta) {
      cfg.explicit_constants = ExplicitConstants{
          *spec.beta, spec.L.value_or(p.smoothness()),
          spec.D.value_or(set.diameter()), *spec.delta};
    }
    switch (cfg.algorithm) {
      case Algorithm::kFw: return run_fw(cfg, p, set);
      case Algorithm::kSvfw: return run_svfw(cfg, p, set);
      default: return run_sagafw(cfg, p, set);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(kInfeasibleError, e.what());
  }
}

bool verify_accounting(const RunRecord& rec, const RunConfig& cfg,
                       std::size_t n) {
  using U = std::uint64_t;
  const OracleCounters& c = rec.counters;
  const U T = cfg.T;
  switch (cfg.algorithm) {
    case Algorithm::kFw:
      return c.sfo == 0 && c.ifo == U(n) * T && c.lo == T;
    case Algorithm::kSfw: {
      const U b = cfg.b.value_or(cfg.T);
      return rec.b == b && c.ifo == 0 && c.sfo == b * T && c.lo == T;
    }
    case Algorithm::kSvfw: {
      const U m = cfg.m.value_or(ceil_root3(n));
      const U b = cfg.b.value_or(m * m);
      const U S = (T + m - 1) / m;
      return rec.m == m && rec.b == b && c.sfo == 0 &&
             c.ifo == S * (n + 2 * m * b) && c.lo == S * m;
    }
    case Algorithm::kSagafw: {
      const U b = cfg.b.value_or(ceil_root3(n));
      return rec.b == b && c.sfo == 0 && c.ifo >= n + b * T &&
             c.ifo <= n + 2 * b * T && c.lo == T;
    }
    case Algorithm::kSvfwS: {
      const U B = cfg.B.value_or(cfg.T);
      const U m = ceil_root3(B);
      const U b = ceil_root3(B, 2);
      const U S = (T + m - 1) / m;
      return rec.B == B && rec.m == m && rec.b == b && c.sfo == B &&
             c.ifo == S * (B + 2 * m * b) && c.lo == S * m &&
             rec.sfo_equivalent == B + c.ifo;
    }
    case Algorithm::kSagafwS: {
      const U B = cfg.B.value_or(cfg.T);
      const U b = ceil_root3(B, 1, 27);
      return rec.B == B && rec.b == b && c.sfo == B && c.ifo >= B + b * T &&
             c.ifo <= B + 2 * b * T && c.lo == T &&
             rec.sfo_equivalent == B + c.ifo;
    }
  }
  return false;
}

double fit_rate(std::span<const std::pair<double, double>> points) {
  std::map<double, std::pair<double, std::size_t>> groups;
  for (const auto& [x, gap] : points) {
    if (!(x > 0.0) || !(gap > 0.0)) {
      throw ArgumentError("fit_rate: abscissae and gaps must be positive");
    }
    auto& g = groups[x];
    g.first += gap;
    g.second += 1;
  }
  if (groups.size() < 2) {
    throw ArgumentError("fit_rate: need at least two distinct abscissae");
  }
  std::vector<std::pair<double, double>> logs;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, g] : groups) {
    logs.emplace_back(std::log(x), std::log(g.first / static_cast<double>(g.second)));
    mx += logs.back().first;
    my += logs.back().second;
  }
  mx /= static_cast<double>(logs.size());
  my /= static_cast<double>(logs.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxy += (lx - mx) * (ly - my);
    sxx += (lx - mx) * (lx - mx);
  }
  return sxy / sxx;
}

const std::string& csv_header() {
  static const std::string header =
      "algo,problem,n,d,T,m,b,B,seed,gamma,mean_gap,final_gap,output_gap,"
      "sfo,ifo,lo,gap_ifo,gap_lo,elapsed_ms";
  return header;
}

std::string csv_row(const RunSpec& spec, const RunRecord& rec) {
  std::ostringstream os;
  const OracleCounters& c = rec.counters;
  os << to_string(rec.algorithm) << ',' << to_string(spec.problem) << ','
     << rec.n << ',' << rec.d << ',' << rec.T << ',' << rec.m << ',' << rec.b
     << ',' << rec.B << ',' << spec.config.seed << ',' << real(rec.gamma) << ','
     << real(rec.mean_gap) << ',' << real(rec.final_gap) << ','
     << real(rec.output_gap) << ',' << c.sfo << ',' << c.ifo << ',' << c.lo
     << ',' << c.gap_ifo << ',' << c.gap_lo << ','
     << (spec.timing ? real(rec.elapsed_ms) : std::string("0"));
  return os.str();
}

SweepResult run_sweep(const SweepSpec& sweep, std::size_t workers) {
  if (sweep.values.empty()) throw ConfigError(kUsageError, "sweep needs --values");
  for (std::size_t k = 0; k < sweep.values.size(); ++k) {
    if (sweep.values[k] == 0 || (k > 0 && sweep.values[k] <= sweep.values[k - 1])) {
      throw ConfigError(kUsageError,
                        "sweep values must be positive and strictly increasing");
    }
  }
  if (sweep.repeats == 0) throw ConfigError(kUsageError, "repeats must be >= 1");

  SweepResult result;
  for (std::size_t value : sweep.values) {
    for (std::size_t r = 0; r < sweep.repeats; ++r) {
      RunSpec spec = sweep.base;
      if (sweep.axis == SweepAxis::kT) {
        spec.config.T = value;
      } else {
        spec.n = value;
      }
      spec.config.seed = sweep.base.config.seed + r;
      result.specs.push_back(std::move(spec));
    }
  }

  const std::size_t jobs = result.specs.size();
  result.records.resize(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        result.records[k] = execute(result.specs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ostringstream csv;
  csv << csv_header() << '\n';
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < jobs; ++k) {
    csv << csv_row(result.specs[k], result.records[k]) << '\n';
    points.emplace_back(static_cast<double>(sweep.values[k / sweep.repeats]),
                        result.records[k].mean_gap);
  }
  if (sweep.values.size() >= 2) {
    try {
      result.slope = fit_rate(points);
      csv << "#slope=" << real(*result.slope) << '\n';
    } catch (const ArgumentError&) {
      csv << "#slope=undefined\n";
    }
  }
  result.csv = csv.str();
  return result;
}

CheckReport self_check() {
  CheckReport report;
  std::ostringstream out;
  auto record = [&](const std::string& name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << '\n';
    report.passed = report.passed && ok;
  };

  // Accounting and feasibility for every solver.
  for (Algorithm algo : {Algorithm::kFw, Algorithm::kSfw, Algorithm::kSvfw,
                         Algorithm::kSagafw, Algorithm::kSvfwS,
                         Algorithm::kSagafwS}) {
    RunSpec spec;
    spec.problem = ProblemKind::kIndefiniteQuadratic;
    spec.d = 4;
    spec.n = 27;
    spec.config.algorithm = algo;
    spec.config.T = 20;
    spec.config.seed = 7;
    spec.config.gap_every = 1;
    spec.config.eval_batch = 64;
    if (algo == Algorithm::kSfw) spec.config.b = 5;
    try {
      const RunRecord rec = execute(spec);
      record("accounting " + std::string(to_string(algo)),
             verify_accounting(rec, spec.config, spec.n));
      bool gaps_ok = true;
      for (const auto& e : rec.log) gaps_ok = gaps_ok && e.gap >= -1e-12;
      record("gap nonnegative " + std::string(to_string(algo)), gaps_ok);
      const ConstraintSet set = parse_set(spec.set, spec.d);
      record("feasible output " + std::string(to_string(algo)),
             set.contains(rec.output, 1e-9) && set.contains(rec.final_iterate, 1e-9));
      const RunRecord again = execute(spec);
      record("deterministic " + std::string(to_string(algo)),
             csv_row(spec, rec) == csv_row(spec, again));
    } catch (const std::exception& e) {
      record(std::string("run ") + std::string(to_string(algo)) + ": " + e.what(), false);
    }
  }

  // LMO against exhaustive enumeration.
  RngStream rng(11, streams::kDataGeneration);
  for (const ConstraintSet& set :
       {ConstraintSet::simplex(6), ConstraintSet::l1_ball(6, 2.0),
        ConstraintSet::box(6, -1.0, 2.0)}) {
    bool agree = true;
    for (int k = 0; k < 200; ++k) {
      Vector dir(6);
      for (double& c : dir.coords()) c = rng.normal();
      agree = agree && set.lmo(dir) == set.brute_force_lmo(dir);
    }
    record("lmo matches enumeration on " + set.describe(), agree);
  }

  report.text = out.str();
  return report;
}

}  // namespace projfree
