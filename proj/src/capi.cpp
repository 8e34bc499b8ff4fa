#include "projfree/projfree.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>

#include "projfree/bench.hpp"

struct pf_spec {
  projfree::RunSpec spec;
};

struct pf_record {
  projfree::RunSpec spec;
  projfree::RunRecord record;
};

namespace {

thread_local std::string g_last_error;

pf_status fail(pf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/// Runs `body`, translating exceptions into status codes.
template <class Body>
pf_status guarded(Body&& body) {
  try {
    return body();
  } catch (const projfree::ConfigError& e) {
    return fail(static_cast<pf_status>(e.exit_code()), e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PF_ERR_INFEASIBLE, e.what());
  } catch (const std::exception& e) {
    return fail(PF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PF_ERR_INTERNAL, "unknown error");
  }
}

std::size_t parse_count(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw projfree::ConfigError(projfree::kUsageError,
                                "--" + std::string(key) +
                                    " expects a nonnegative integer, got '" +
                                    std::string(text) + "'");
  }
  return static_cast<std::size_t>(v);
}

double parse_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw projfree::ConfigError(projfree::kUsageError,
                                "--" + std::string(key) +
                                    " expects a real number, got '" +
                                    std::string(text) + "'");
  }
  return v;
}

bool parse_flag(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw projfree::ConfigError(projfree::kUsageError,
                              "--" + std::string(key) + " expects 0 or 1");
}

void apply(projfree::RunSpec& s, std::string_view key, std::string_view value) {
  using projfree::ConfigError;
  using projfree::kUsageError;
  auto& cfg = s.config;
  if (key == "algo") {
    const auto algo = projfree::parse_algorithm(value);
    if (!algo) throw ConfigError(kUsageError, "unknown algorithm '" + std::string(value) + "'");
    cfg.algorithm = *algo;
  } else if (key == "problem") {
    const auto kind = projfree::parse_problem(value);
    if (!kind) throw ConfigError(kUsageError, "unknown problem '" + std::string(value) + "'");
    s.problem = *kind;
  } else if (key == "set") {
    projfree::parse_set(value, 1);  // syntax check only
    s.set = std::string(value);
  } else if (key == "d") {
    s.d = parse_count(key, value);
  } else if (key == "n") {
    s.n = parse_count(key, value);
  } else if (key == "T") {
    cfg.T = parse_count(key, value);
  } else if (key == "m") {
    cfg.m = parse_count(key, value);
  } else if (key == "b") {
    cfg.b = parse_count(key, value);
  } else if (key == "B") {
    cfg.B = parse_count(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_number(key, value);
  } else if (key == "beta-mode") {
    if (value == "eliminate") {
      s.explicit_beta = false;
    } else if (value == "explicit") {
      s.explicit_beta = true;
    } else {
      throw ConfigError(kUsageError, "--beta-mode expects eliminate or explicit");
    }
  } else if (key == "L") {
    s.L = parse_number(key, value);
  } else if (key == "D") {
    s.D = parse_number(key, value);
  } else if (key == "delta") {
    s.delta = parse_number(key, value);
  } else if (key == "beta") {
    s.beta = parse_number(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_count(key, value);
  } else if (key == "gap-every") {
    cfg.gap_every = parse_count(key, value);
  } else if (key == "eval-batch") {
    cfg.eval_batch = parse_count(key, value);
  } else if (key == "strict") {
    s.strict = parse_flag(key, value);
  } else if (key == "timing") {
    s.timing = parse_flag(key, value);
  } else if (key == "convex-schedule") {
    cfg.convex_schedule = parse_flag(key, value);
  } else {
    throw ConfigError(kUsageError, "unknown option '" + std::string(key) + "'");
  }
}

}  // namespace

extern "C" {

const char* pf_version(void) { return "1.0.0"; }

const char* pf_last_error(void) { return g_last_error.c_str(); }

void pf_string_free(char* s) { std::free(s); }

pf_status pf_spec_create(pf_spec** out) {
  if (!out) return fail(PF_ERR_USAGE, "null output pointer");
  return guarded([&] {
    *out = new pf_spec{};
    return PF_OK;
  });
}

pf_status pf_spec_clone(const pf_spec* spec, pf_spec** out) {
  if (!spec || !out) return fail(PF_ERR_USAGE, "null handle");
  return guarded([&] {
    *out = new pf_spec{spec->spec};
    return PF_OK;
  });
}

void pf_spec_destroy(pf_spec* spec) { delete spec; }

pf_status pf_spec_set(pf_spec* spec, const char* key, const char* value) {
  if (!spec || !key || !value) return fail(PF_ERR_USAGE, "null argument");
  return guarded([&] {
    apply(spec->spec, key, value);
    return PF_OK;
  });
}

pf_status pf_run(const pf_spec* spec, pf_record** out) {
  if (!spec || !out) return fail(PF_ERR_USAGE, "null handle");
  *out = nullptr;
  return guarded([&] {
    auto record = projfree::execute(spec->spec);
    *out = new pf_record{spec->spec, std::move(record)};
    return PF_OK;
  });
}

void pf_record_destroy(pf_record* rec) { delete rec; }

pf_status pf_record_summary(const pf_record* rec, pf_summary* out) {
  if (!rec || !out) return fail(PF_ERR_USAGE, "null handle");
  const auto& r = rec->record;
  *out = pf_summary{r.n,          r.d,        r.T,          r.iterations,
                    r.m,          r.b,        r.B,          r.epochs,
                    r.output_index, r.gamma,  r.mean_gap,   r.final_gap,
                    r.output_gap, r.elapsed_ms};
  return PF_OK;
}

pf_status pf_record_counters(const pf_record* rec, pf_counters* out) {
  if (!rec || !out) return fail(PF_ERR_USAGE, "null handle");
  const auto& c = rec->record.counters;
  *out = pf_counters{c.sfo, c.ifo, c.lo, c.gap_ifo, c.gap_lo,
                     rec->record.sfo_equivalent};
  return PF_OK;
}

size_t pf_record_log_size(const pf_record* rec) {
  return rec ? rec->record.log.size() : 0;
}

pf_status pf_record_log_entry(const pf_record* rec, size_t index,
                              pf_log_entry* out) {
  if (!rec || !out) return fail(PF_ERR_USAGE, "null handle");
  if (index >= rec->record.log.size()) return fail(PF_ERR_USAGE, "log index out of range");
  const auto& e = rec->record.log[index];
  *out = pf_log_entry{e.step, e.epoch, e.gap, e.objective};
  return PF_OK;
}

size_t pf_record_warning_count(const pf_record* rec) {
  return rec ? rec->record.warnings.size() : 0;
}

const char* pf_record_warning(const pf_record* rec, size_t index) {
  if (!rec || index >= rec->record.warnings.size()) return nullptr;
  return rec->record.warnings[index].c_str();
}

pf_status pf_record_output(const pf_record* rec, double* coords,
                           size_t capacity, size_t* dim) {
  if (!rec || !dim) return fail(PF_ERR_USAGE, "null handle");
  const auto& x = rec->record.output;
  *dim = x.dim();
  if (coords) {
    for (size_t i = 0; i < x.dim() && i < capacity; ++i) coords[i] = x[i];
  }
  return PF_OK;
}

pf_status pf_verify_accounting(const pf_record* rec, int* ok) {
  if (!rec || !ok) return fail(PF_ERR_USAGE, "null handle");
  return guarded([&] {
    *ok = projfree::verify_accounting(rec->record, rec->spec.config, rec->spec.n) ? 1 : 0;
    return PF_OK;
  });
}

const char* pf_csv_header(void) { return projfree::csv_header().c_str(); }

pf_status pf_record_csv_row(const pf_record* rec, char** out) {
  if (!rec || !out) return fail(PF_ERR_USAGE, "null handle");
  return guarded([&] {
    *out = duplicate(projfree::csv_row(rec->spec, rec->record));
    return *out ? PF_OK : fail(PF_ERR_INTERNAL, "out of memory");
  });
}

pf_status pf_sweep(const pf_spec* base, const char* axis,
                   const uint64_t* values, size_t count, uint32_t repeats,
                   uint32_t workers, char** csv_out) {
  if (!base || !axis || (!values && count > 0) || !csv_out) {
    return fail(PF_ERR_USAGE, "null argument");
  }
  *csv_out = nullptr;
  return guarded([&] {
    projfree::SweepSpec sweep;
    const std::string_view a(axis);
    if (a == "T") {
      sweep.axis = projfree::SweepAxis::kT;
    } else if (a == "n") {
      sweep.axis = projfree::SweepAxis::kN;
    } else {
      return fail(PF_ERR_USAGE, "sweep axis must be T or n");
    }
    sweep.values.assign(values, values + count);
    sweep.repeats = repeats;
    sweep.base = base->spec;
    const auto result = projfree::run_sweep(sweep, workers);
    *csv_out = duplicate(result.csv);
    return *csv_out ? PF_OK : fail(PF_ERR_INTERNAL, "out of memory");
  });
}

pf_status pf_fit_rate(const double* x, const double* gap, size_t count,
                      double* slope) {
  if (!x || !gap || !slope) return fail(PF_ERR_USAGE, "null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> points;
    for (size_t k = 0; k < count; ++k) points.emplace_back(x[k], gap[k]);
    *slope = projfree::fit_rate(points);
    return PF_OK;
  });
}

pf_status pf_self_check(int* passed, char** report) {
  if (!passed) return fail(PF_ERR_USAGE, "null argument");
  return guarded([&] {
    const auto result = projfree::self_check();
    *passed = result.passed ? 1 : 0;
    if (report) *report = duplicate(result.text);
    return PF_OK;
  });
}

}  // extern "C"
