#pragma once

// Subcommand implementations behind the relequil executable. Each returns
// the report text and an exit code instead of touching the process, so the
// test suite can drive them directly.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relequil/io.hpp"
#include "relequil/nbody.hpp"

namespace relequil::cli {

enum class Backend { exact, float64 };

enum ExitCode : int { success = 0, input_error = 1, indeterminate = 2, irregular_crossing = 3 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  Backend backend = Backend::exact;
  /// Absolute tolerance for the float backend; replaces 1e-8 (1 + ||A||).
  std::optional<double> tol;
  std::optional<std::string> omega_path;
  std::optional<std::string> out_path;
  std::optional<std::string> s_max;
  std::uint64_t seed = 0;
};

struct RunResult {
  int exit_code = success;
  std::string report;      // JSON or table text, empty when nothing was produced
  std::string diagnostic;  // one-line message for stderr
};

RunResult run_classify(const RunConfig& cfg);
RunResult run_flow(const RunConfig& cfg);
RunResult run_find_cc(const RunConfig& cfg);
RunResult run_nbody_stability(const RunConfig& cfg);

using AmendedHessianFn =
    std::function<nbody::AmendedHessianReport(const nbody::CentralConfiguration&, const numeric::Tolerance&)>;

/// Injection points for mutation testing of the example harness.
struct ExampleHooks {
  AmendedHessianFn amended_hessian;
};

struct ExampleRow {
  std::string anchor;
  std::string source;  // "worked example", "derived" or "direct"
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct ExamplesResult {
  std::vector<ExampleRow> rows;
  int exit_code = success;
  std::string table;
};

ExamplesResult run_examples(std::uint64_t seed, const ExampleHooks& hooks = {});
RunResult run_paper_examples(const RunConfig& cfg);

/// Dispatches on cfg.subcommand.
RunResult dispatch(const RunConfig& cfg);

/// RELEQUIL_SEED when set and numeric, else a fixed default.
std::uint64_t seed_from_env();

// Report fragments shared with the tests.
io::Json to_json(const IndexReport& r);
io::Json to_json(const Spectrum& s);

}  // namespace relequil::cli
