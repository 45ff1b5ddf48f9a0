// price-opt: revenue-optimal pricing policies for a fixed stock sold over a
// finite horizon under intermediate sales and revenue constraints.

#include <CLI11.hpp>

#include "priceopt/cli.hpp"

namespace {

priceopt::GridSearchSpec parse_grid(const std::string& text) {
  priceopt::GridSearchSpec spec{};
  char comma1 = 0, comma2 = 0;
  std::istringstream in(text);
  in >> spec.min >> comma1 >> spec.max >> comma2 >> spec.step;
  if (!in || comma1 != ',' || comma2 != ',')
    throw CLI::ValidationError("--grid expects min,max,step");
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal pricing policies for fixed-stock finite-horizon sales"};
  app.require_subcommand(1);

  priceopt::cli::RunConfig cfg;
  std::string grid_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", cfg.out_path, "Output path (default: stdout)");
  };

  CLI::App* solve_basic = app.add_subcommand("solve-basic", "Piecewise-constant optimum (zeta == 1)");
  add_common(solve_basic);

  CLI::App* solve_tvm = app.add_subcommand("solve-tvm", "TVM-aware optimum (linear propensity)");
  add_common(solve_tvm);

  CLI::App* simulate = app.add_subcommand("simulate", "Forward-integrate a policy");
  add_common(simulate);
  simulate->add_option("--dt", cfg.dt, "Time step in days (default: T/100000)");
  std::string policy_path;
  simulate->add_option("--policy", policy_path, "Policy CSV to simulate");
  simulate->add_option("--baseline", cfg.baselines,
                       "Baseline policy: nearest|phi-blind|kappa-blind|both-blind");

  CLI::App* compare = app.add_subcommand("compare", "Optimal policy vs baselines");
  add_common(compare);
  compare->add_option("--dt", cfg.dt, "Time step in days (default: T/100000)");
  compare->add_option("--baseline", cfg.baselines,
                      "Baselines to include (repeatable; default: nearest)");

  CLI::App* certify = app.add_subcommand("certify", "Brute-force optimality check");
  add_common(certify);
  certify->add_option("--grid", grid_text, "Search grid as min,max,step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_basic->parsed()) cfg.command = priceopt::cli::Command::solve_basic;
    if (solve_tvm->parsed()) cfg.command = priceopt::cli::Command::solve_tvm;
    if (simulate->parsed()) {
      cfg.command = priceopt::cli::Command::simulate;
      if (!policy_path.empty()) cfg.policy_path = policy_path;
    }
    if (compare->parsed()) cfg.command = priceopt::cli::Command::compare;
    if (certify->parsed()) {
      cfg.command = priceopt::cli::Command::certify;
      if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return priceopt::cli::kExitError;
  }

  return priceopt::cli::run(cfg);
}
