// projfree: command-line driver for the Frank-Wolfe benchmark harness.
// Everything goes through the C API in projfree.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "projfree/projfree.h"

namespace {

struct SpecDeleter {
  void operator()(pf_spec* s) const { pf_spec_destroy(s); }
};
struct RecordDeleter {
  void operator()(pf_record* r) const { pf_record_destroy(r); }
};
struct StringDeleter {
  void operator()(char* s) const { pf_string_free(s); }
};
using SpecPtr = std::unique_ptr<pf_spec, SpecDeleter>;
using RecordPtr = std::unique_ptr<pf_record, RecordDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

/// Long names of valued options forwarded verbatim to pf_spec_set.
const std::vector<std::string> kValueKeys = {
    "algo", "problem", "set",   "d",    "n",    "T",         "m",
    "b",    "B",       "gamma", "beta-mode", "L", "D",       "delta",
    "beta", "seed",    "gap-every", "eval-batch"};
const std::vector<std::string> kFlagKeys = {"strict", "timing",
                                            "convex-schedule"};

const std::map<std::string, std::string> kProblemAliases = {
    {"sigmoid_loss", "sigmoid"},
    {"indefinite_quadratic", "indefquad"},
    {"convex_quadratic", "convexquad"}};

struct RunFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  for (const auto& key : kValueKeys) {
    cmd->add_option("--" + key, f.values[key]);
  }
  for (const auto& key : {"algo", "problem", "d", "T", "seed"}) {
    cmd->get_option(std::string("--") + key)->required();
  }
  for (const auto& key : kFlagKeys) {
    cmd->add_flag("--" + key, f.flags[key]);
  }
  cmd->add_option("--out", f.out, "CSV destination (default: stdout)");
}

int report(pf_status status) {
  std::cerr << "projfree: " << pf_last_error() << '\n';
  return static_cast<int>(status);
}

/// Builds a spec from the options that were actually given.
pf_status build_spec(CLI::App* cmd, RunFlags& f, SpecPtr& spec) {
  pf_spec* raw = nullptr;
  if (pf_status s = pf_spec_create(&raw); s != PF_OK) return s;
  spec.reset(raw);
  for (const auto& key : kValueKeys) {
    if (cmd->count("--" + key) == 0) continue;
    std::string value = f.values[key];
    if (key == "problem") {
      if (auto it = kProblemAliases.find(value); it != kProblemAliases.end())
        value = it->second;
    }
    if (pf_status s = pf_spec_set(spec.get(), key.c_str(), value.c_str()); s != PF_OK)
      return s;
  }
  for (const auto& key : kFlagKeys) {
    if (f.flags[key]) {
      if (pf_status s = pf_spec_set(spec.get(), key.c_str(), "1"); s != PF_OK) return s;
    }
  }
  return PF_OK;
}

int write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return std::cout ? 0 : 1;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) {
    std::cerr << "projfree: cannot write " << path << '\n';
    return 1;
  }
  return 0;
}

bool parse_values(const std::string& text, std::vector<uint64_t>& out) {
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      return false;
    out.push_back(std::stoull(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return !out.empty();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free stochastic and variance-reduced Frank-Wolfe benchmarks"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Execute a single run and emit one CSV row");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  std::string axis, values_text;
  uint32_t repeats = 1;
  uint32_t workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Sweep T or n and fit the log-log gap slope");
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--axis", axis)->required()->check(CLI::IsMember({"T", "n"}));
  sweep->add_option("--values", values_text)->required();
  sweep->add_option("--repeats", repeats)->required();
  sweep->add_option("--workers", workers, "Parallel runs (output is unaffected)");

  auto* check = app.add_subcommand("check", "Accounting and invariant smoke suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (check->parsed()) {
    int passed = 0;
    char* text = nullptr;
    if (pf_status s = pf_self_check(&passed, &text); s != PF_OK) return report(s);
    StringPtr owned(text);
    std::cout << text;
    return passed ? 0 : 1;
  }

  if (run->parsed()) {
    SpecPtr spec;
    if (pf_status s = build_spec(run, run_flags, spec); s != PF_OK) return report(s);
    pf_record* raw = nullptr;
    if (pf_status s = pf_run(spec.get(), &raw); s != PF_OK) return report(s);
    RecordPtr rec(raw);
    for (size_t k = 0; k < pf_record_warning_count(rec.get()); ++k) {
      std::cerr << "projfree: warning: " << pf_record_warning(rec.get(), k) << '\n';
    }
    char* row = nullptr;
    if (pf_status s = pf_record_csv_row(rec.get(), &row); s != PF_OK) return report(s);
    StringPtr owned(row);
    return write_output(run_flags.out, std::string(pf_csv_header()) + "\n" + row + "\n");
  }

  SpecPtr spec;
  if (pf_status s = build_spec(sweep, sweep_flags, spec); s != PF_OK) return report(s);
  std::vector<uint64_t> values;
  if (!parse_values(values_text, values)) {
    std::cerr << "projfree: --values expects comma-separated positive integers\n";
    return 2;
  }
  char* csv = nullptr;
  if (pf_status s = pf_sweep(spec.get(), axis.c_str(), values.data(), values.size(),
                             repeats, workers, &csv);
      s != PF_OK) {
    return report(s);
  }
  StringPtr owned(csv);
  return write_output(sweep_flags.out, csv);
}
