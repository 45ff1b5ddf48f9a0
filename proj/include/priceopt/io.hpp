#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "priceopt/policy.hpp"
#include "priceopt/scenario.hpp"
#include "priceopt/simulator.hpp"

namespace priceopt {

/// Shortest decimal that round-trips the double exactly; keeps data files
/// byte-deterministic and re-readable without loss.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr int kPolicySchemaVersion = 1;

/// Policy CSV: a version comment, a header, one row per segment.
/// Multiplier rows are interpreted against the weights of the scenario the
/// file is later loaded with.
inline void write_policy_csv(std::ostream& os, const PricingPolicy& policy) {
  os << "# price-opt policy schema_version=" << kPolicySchemaVersion << "\n";
  os << "t_start,t_end,form,value\n";
  for (const PolicySegment& seg : policy.segments()) {
    os << format_double(seg.t_start) << ',' << format_double(seg.t_end) << ','
       << (seg.form == SegmentForm::constant_price ? "const" : "tvm") << ','
       << format_double(seg.value) << "\n";
  }
}

inline PricingPolicy read_policy_csv(std::istream& is, const Scenario& context) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# price-opt policy schema_version=", 0) != 0)
    throw validation_error("policy file missing schema_version header");
  if (line != "# price-opt policy schema_version=1")
    throw validation_error("unsupported policy schema_version");
  if (!std::getline(is, line) || line != "t_start,t_end,form,value")
    throw validation_error("policy file missing column header");

  std::vector<PolicySegment> segments;
  bool any_tvm = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t0, t1, form, value;
    if (!std::getline(row, t0, ',') || !std::getline(row, t1, ',') ||
        !std::getline(row, form, ',') || !std::getline(row, value))
      throw validation_error("malformed policy row: " + line);
    PolicySegment seg;
    try {
      seg.t_start = std::stod(t0);
      seg.t_end = std::stod(t1);
      seg.value = std::stod(value);
    } catch (const std::exception&) {
      throw validation_error("malformed number in policy row: " + line);
    }
    if (form == "const") {
      seg.form = SegmentForm::constant_price;
    } else if (form == "tvm") {
      seg.form = SegmentForm::tvm_multiplier;
      any_tvm = true;
    } else {
      throw validation_error("unknown segment form '" + form + "'");
    }
    segments.push_back(seg);
  }
  if (any_tvm && !context.propensity().is_linear())
    throw validation_error("multiplier policy needs a scenario with linear propensity");
  const Propensity& v = context.propensity();
  return PricingPolicy(std::move(segments), context.phi(), context.kappa(),
                       v.is_linear() ? v.linear_a() : std::numeric_limits<double>::quiet_NaN(),
                       v.is_linear() ? v.linear_b() : std::numeric_limits<double>::quiet_NaN());
}

/// Time-series CSV, one header row, exact column set.
inline void write_timeseries_csv(std::ostream& os, const SimulationResult& result) {
  os << "t,posted_price,internal_price,cum_sales,cum_nominal_revenue,cum_objective_revenue\n";
  for (const SimSample& s : result.samples) {
    os << format_double(s.t) << ',' << format_double(s.posted_price) << ','
       << format_double(s.internal_price) << ',' << format_double(s.cum_sales) << ','
       << format_double(s.cum_nominal_revenue) << ','
       << format_double(s.cum_objective_revenue) << "\n";
  }
}

/// Comparison report: revenue table, pairwise deltas, per-tau slacks.
inline void write_compare_csv(std::ostream& os, const PolicyComparison& cmp) {
  os << "# price-opt compare schema_version=1\n";
  os << "policy,final_sales,final_objective_revenue\n";
  for (const auto& row : cmp.rows)
    os << row.label << ',' << format_double(row.final_sales) << ','
       << format_double(row.final_objective_revenue) << "\n";
  os << "# pairwise relative deltas\n";
  os << "policy_a,policy_b,relative_delta\n";
  for (const auto& d : cmp.deltas)
    os << d.label_a << ',' << d.label_b << ',' << format_double(d.relative) << "\n";
  os << "# constraint slacks\n";
  os << "policy,tau,sales_slack,revenue_slack\n";
  for (const auto& row : cmp.rows)
    for (const auto& slack : row.slacks)
      os << row.label << ',' << format_double(slack.tau) << ','
         << format_double(slack.sales_slack) << ',' << format_double(slack.revenue_slack)
         << "\n";
}

/// Human-readable account of the solver iterations.
inline void write_trace_text(std::ostream& os, const SolveTrace& trace) {
  for (std::size_t n = 0; n < trace.steps.size(); ++n) {
    const SolveStep& step = trace.steps[n];
    os << "segment " << (n + 1) << ": [" << format_double(step.t_start) << ", "
       << format_double(step.t_end) << ")  binding " << to_string(step.binding_kind)
       << " constraint k=" << step.binding_index << "\n";
    os << "  acquired at start: sales=" << format_double(step.start_sales)
       << " revenue=" << format_double(step.start_revenue) << "\n";
    if (step.candidates.empty()) {
      os << "  no active residuals; holding price at the no-sale cap\n";
      continue;
    }
    os << "  candidates:";
    for (const SolveCandidate& c : step.candidates) {
      os << "  k=" << c.constraint_index << " " << to_string(c.kind)
         << " p=" << format_double(c.price);
      if (!std::isnan(c.q)) os << " q=" << format_double(c.q);
    }
    os << "\n";
  }
}

}  // namespace priceopt
