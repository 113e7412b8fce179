#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "relequil/cli.hpp"

int main(int argc, char** argv) {
  using relequil::cli::Backend;
  relequil::cli::RunConfig cfg;
  std::string backend = "exact";
  double tol = 0.0;
  std::string omega, out, s_max;

  CLI::App app{"Stability of linearized Hamiltonian systems and planar relative equilibria"};
  app.require_subcommand(1);
  app.add_option("--backend", backend, "Arithmetic backend")->check(CLI::IsMember({"exact", "float"}));
  auto* tol_opt = app.add_option("--tol", tol, "Absolute tolerance for the float backend")->check(CLI::PositiveNumber);
  auto* omega_opt = app.add_option("--omega", omega, "Skew matrix file replacing J")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out, "Write the report here instead of stdout");
  auto* s_max_opt = app.add_option("--s-max", s_max, "End of the Krein path");
  app.fallthrough();

  std::vector<std::string> inputs;
  auto add_input = [&](CLI::App* sub) { sub->add_option("input", inputs, "Input file")->required(); };
  add_input(app.add_subcommand("classify", "Classify Omega*B for a symmetric matrix B"));
  add_input(app.add_subcommand("flow", "Spectral flow along a path file"));
  add_input(app.add_subcommand("nbody-find-cc", "Find a central configuration from a problem file"));
  add_input(app.add_subcommand("nbody-stability", "Amended Hessian indices and verdicts for a problem file"));
  app.add_subcommand("paper-examples", "Reproduce the built-in worked examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : relequil::cli::input_error;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.inputs = inputs;
  cfg.backend = backend == "float" ? Backend::float64 : Backend::exact;
  if (*tol_opt) cfg.tol = tol;
  if (*omega_opt) cfg.omega_path = omega;
  if (*out_opt) cfg.out_path = out;
  if (*s_max_opt) cfg.s_max = s_max;
  cfg.seed = relequil::cli::seed_from_env();

  relequil::cli::RunResult r = relequil::cli::dispatch(cfg);
  if (!r.report.empty()) {
    if (cfg.out_path) {
      std::ofstream f(*cfg.out_path, std::ios::binary);
      if (!f) {
        std::cerr << "relequil: cannot write " << *cfg.out_path << "\n";
        return relequil::cli::input_error;
      }
      f << r.report;
    } else {
      std::cout << r.report;
    }
  }
  if (!r.diagnostic.empty()) std::cerr << "relequil: " << r.diagnostic << "\n";
  return r.exit_code;
}
