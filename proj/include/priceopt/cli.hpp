#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "priceopt/io.hpp"
#include "priceopt/logging.hpp"
#include "priceopt/oracle.hpp"
#include "priceopt/scenario_json.hpp"
#include "priceopt/simulator.hpp"
#include "priceopt/solver_basic.hpp"
#include "priceopt/solver_tvm.hpp"

namespace priceopt::cli {

enum class Command { solve_basic, solve_tvm, simulate, compare, certify };

struct RunConfig {
  Command command = Command::solve_basic;
  std::string scenario_path;
  std::string out_path;                  // empty: primary artifact to stdout
  std::optional<double> dt;
  std::optional<std::string> policy_path;  // simulate: read policy from file
  std::vector<std::string> baselines;      // simulate/compare: named baselines
  std::optional<GridSearchSpec> grid;      // certify
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;       // I/O or validation failure
inline constexpr int kExitInfeasible = 2;  // scenario cannot be solved

namespace detail {

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write output file: " + path);
  out << body;
}

inline void emit(const RunConfig& cfg, const std::string& body) {
  if (cfg.out_path.empty())
    std::cout << body;
  else
    write_file(cfg.out_path, body);
}

inline void emit_sidecar(const RunConfig& cfg, const std::string& command,
                         const nlohmann::json& extra) {
  if (cfg.out_path.empty()) return;
  nlohmann::json meta = extra;
  meta["schema_version"] = 1;
  meta["command"] = command;
  meta["scenario"] = cfg.scenario_path;
  write_file(cfg.out_path + ".meta.json", meta.dump(2) + "\n");
}

inline SolveResult solve_for(const Scenario& s, bool force_basic) {
  if (force_basic || !s.propensity().is_linear()) return solve_basic(s);
  return solve_tvm_linear(s);
}

inline PricingPolicy named_baseline(const Scenario& s, const std::string& name) {
  if (name == "nearest") return baseline_nearest_constraint(s);
  if (name == "phi-blind") return baseline_value_blind(s, BlindMode::phi);
  if (name == "kappa-blind") return baseline_value_blind(s, BlindMode::kappa);
  if (name == "both-blind") return baseline_value_blind(s, BlindMode::both);
  throw validation_error("unknown baseline '" + name +
                         "' (expected nearest|phi-blind|kappa-blind|both-blind)");
}

inline int run_solve(const RunConfig& cfg, bool basic) {
  const Scenario s = load_scenario_file(cfg.scenario_path);
  const SolveResult result = basic ? solve_basic(s) : solve_tvm_linear(s);
  std::ostringstream csv;
  write_policy_csv(csv, result.policy);
  emit(cfg, csv.str());
  if (!cfg.out_path.empty()) {
    std::ostringstream trace;
    write_trace_text(trace, result.trace);
    write_file(cfg.out_path + ".trace.txt", trace.str());
    emit_sidecar(cfg, basic ? "solve-basic" : "solve-tvm",
                 {{"segments", result.policy.segments().size()}});
  }
  log_info("solved " + cfg.scenario_path + " into " +
           std::to_string(result.policy.segments().size()) + " segment(s)");
  return kExitOk;
}

inline int run_simulate(const RunConfig& cfg) {
  const Scenario s = load_scenario_file(cfg.scenario_path);
  const double dt = cfg.dt.value_or(default_sim_dt(s));
  PricingPolicy policy = [&]() -> PricingPolicy {
    if (cfg.policy_path) {
      std::ifstream in(*cfg.policy_path);
      if (!in) throw validation_error("cannot open policy file: " + *cfg.policy_path);
      return read_policy_csv(in, s);
    }
    if (!cfg.baselines.empty()) {
      if (cfg.baselines.size() != 1)
        throw validation_error("simulate takes exactly one baseline");
      return named_baseline(s, cfg.baselines.front());
    }
    return solve_for(s, false).policy;
  }();
  const SimulationResult result = simulate(s, policy, dt);
  std::ostringstream csv;
  write_timeseries_csv(csv, result);
  emit(cfg, csv.str());
  emit_sidecar(cfg, "simulate",
               {{"dt", dt},
                {"final_sales", result.summary.final_sales},
                {"final_objective_revenue", result.summary.final_objective_revenue}});
  return kExitOk;
}

inline int run_compare(const RunConfig& cfg) {
  const Scenario s = load_scenario_file(cfg.scenario_path);
  const double dt = cfg.dt.value_or(default_sim_dt(s));
  std::vector<std::string> baselines = cfg.baselines;
  if (baselines.empty()) baselines.push_back("nearest");

  std::vector<SimulationResult> results;
  results.push_back(simulate(s, solve_for(s, false).policy, dt, "optimal"));
  for (const std::string& name : baselines)
    results.push_back(simulate(s, named_baseline(s, name), dt, name));
  const PolicyComparison cmp = compare(results);
  std::ostringstream csv;
  write_compare_csv(csv, cmp);
  emit(cfg, csv.str());
  emit_sidecar(cfg, "compare", {{"dt", dt}, {"policies", results.size()}});
  return kExitOk;
}

inline int run_certify(const RunConfig& cfg) {
  const Scenario s = load_scenario_file(cfg.scenario_path);
  std::ostringstream report;
  bool pass = false;
  if (s.zeta_is_unit()) {
    const SolveResult solved = solve_basic(s);
    double max_price = s.propensity().p_star();
    for (const PolicySegment& seg : solved.policy.segments())
      max_price = std::max(max_price, seg.value);
    const GridSearchSpec spec = cfg.grid.value_or(
        GridSearchSpec{s.propensity().p_star(), max_price + 0.02, 1e-3});
    const OracleResult oracle = best_piecewise_constant(s, spec);
    const double revenue = policy_totals(s, solved.policy).objective_revenue;
    const double bound = spec.step;
    pass = !oracle.feasible_found || oracle.best_objective <= revenue + bound;
    report << "certify basic: solver revenue " << format_double(revenue)
           << ", oracle best " << format_double(oracle.best_objective) << ", bound "
           << format_double(bound) << (pass ? " -> PASS" : " -> FAIL") << "\n";
  } else {
    const SolveResult solved = solve_tvm_linear(s);
    double min_q = 0.0;
    for (const PolicySegment& seg : solved.policy.segments())
      if (seg.form == SegmentForm::tvm_multiplier) min_q = std::min(min_q, seg.value);
    const GridSearchSpec spec =
        cfg.grid.value_or(GridSearchSpec{min_q * 1.5 - 0.05, 0.0, 1e-3});
    const OracleResult oracle = best_piecewise_q(s, spec);
    const double revenue = policy_totals(s, solved.policy).objective_revenue;
    const double bound = 0.1 * spec.step;
    pass = !oracle.feasible_found || oracle.best_objective <= revenue + bound;
    report << "certify tvm: solver objective revenue " << format_double(revenue)
           << ", oracle best " << format_double(oracle.best_objective) << ", bound "
           << format_double(bound) << (pass ? " -> PASS" : " -> FAIL") << "\n";
  }
  emit(cfg, report.str());
  return pass ? kExitOk : kExitError;
}

}  // namespace detail

/// Executes one command; writes artifacts; maps failures to exit codes.
inline int run(const RunConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::solve_basic:
        return detail::run_solve(cfg, true);
      case Command::solve_tvm:
        return detail::run_solve(cfg, false);
      case Command::simulate:
        return detail::run_simulate(cfg);
      case Command::compare:
        return detail::run_compare(cfg);
      case Command::certify:
        return detail::run_certify(cfg);
    }
    return kExitError;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible scenario: " << e.what() << "\n";
    for (const InfeasibilityDetail& d : e.details()) {
      std::cerr << "  constraint " << d.constraint_index << " (" << to_string(d.kind)
                << ") on [" << d.t_start << ", " << d.t_end << "]: requires " << d.required
                << ", capacity " << d.capacity << "\n";
    }
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace priceopt::cli
