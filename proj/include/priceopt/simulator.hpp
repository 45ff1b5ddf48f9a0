#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "priceopt/policy.hpp"
#include "priceopt/scenario.hpp"
#include "priceopt/solver_basic.hpp"
#include "priceopt/solver_tvm.hpp"

namespace priceopt {

struct SimSample {
  double t;
  double posted_price;
  double internal_price;
  double cum_sales;
  double cum_nominal_revenue;
  double cum_objective_revenue;
};

struct ConstraintSlack {
  std::size_t index;
  double tau;
  double sales_slack;    // cum_sales(tau) - S_i
  double revenue_slack;  // cum_objective_revenue(tau) - R_i
};

struct SimulationSummary {
  double final_sales = 0.0;
  double final_nominal_revenue = 0.0;
  double final_objective_revenue = 0.0;
  std::vector<ConstraintSlack> slacks;
};

struct SimulationResult {
  std::string label;
  double dt = 0.0;
  std::vector<SimSample> samples;
  SimulationSummary summary;
  // scenario fingerprint, for compare() mismatch detection
  double horizon = 0.0;
  double total_stock = 0.0;
  std::vector<double> constraint_taus;
};

inline double default_sim_dt(const Scenario& s) { return s.horizon() / 100000.0; }

/// Forward-integrates a policy against a scenario by trapezoid accumulation on
/// a grid containing every multiple of dt plus all policy breakpoints,
/// constraint times and demand breakpoints.
///
/// Sales stop once cumulative sales reach the stock: the seller has nothing
/// left to sell, whatever the posted price. Policies produced by the solvers
/// deplete the stock exactly at T, so the cutoff never reshapes them; it only
/// truncates baselines that would otherwise sell inventory they do not have.
inline SimulationResult simulate(const Scenario& s, const PricingPolicy& policy, double dt,
                                 std::string label = "policy") {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  const double T = s.horizon();
  const double scale = std::max(1.0, T);
  if (std::abs(policy.start()) > 1e-9 * scale || std::abs(policy.end() - T) > 1e-9 * scale)
    throw validation_error("policy does not cover [0, T)");

  // Build the sample grid.
  std::vector<double> grid;
  const long n = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
  grid.reserve(static_cast<std::size_t>(n) + 16);
  for (long m = 0; m < n; ++m) grid.push_back(static_cast<double>(m) * dt);
  grid.push_back(T);
  for (const PolicySegment& seg : policy.segments()) {
    if (seg.t_start > 0.0 && seg.t_start < T) grid.push_back(seg.t_start);
  }
  for (double tau : s.schedule().taus())
    if (tau > 0.0 && tau < T) grid.push_back(tau);
  for (double t : s.demand().interior_breakpoints(0.0, T)) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [scale](double x, double y) { return y - x <= 1e-12 * scale; }),
             grid.end());
  if (grid.back() < T) grid.push_back(T);

  const double stock = s.schedule().total_stock();
  const Propensity& v = s.propensity();

  struct Rates {
    double posted, internal, sales, nominal, objective;
  };
  auto rates_at = [&](const PolicySegment& seg, double t) -> Rates {
    const double posted = policy.posted_price_in(seg, std::min(t, policy.end()));
    const double internal = posted / s.kappa()(t);
    const double frac = v(std::max(internal, 0.0));
    const double lambda = s.demand().rate(t);
    const double sales = frac * lambda;
    const double nominal = posted * sales;
    return {posted, internal, sales, nominal, s.phi()(t) * nominal};
  };
  auto segment_for = [&](double mid) -> const PolicySegment& {
    const auto& segs = policy.segments();
    auto it = std::upper_bound(segs.begin(), segs.end(), mid,
                               [](double val, const PolicySegment& seg) { return val < seg.t_start; });
    return it == segs.begin() ? segs.front() : *(it - 1);
  };

  SimulationResult result;
  result.label = std::move(label);
  result.dt = dt;
  result.samples.reserve(grid.size());

  double cs = 0.0, cn = 0.0, co = 0.0;
  bool sold_out = false;
  {
    const Rates r0 = rates_at(segment_for(0.5 * (grid[0] + grid[1])), grid[0]);
    result.samples.push_back({grid[0], r0.posted, r0.internal, 0.0, 0.0, 0.0});
  }
  for (std::size_t m = 0; m + 1 < grid.size(); ++m) {
    const double u = grid[m];
    const double w = grid[m + 1];
    const double h = w - u;
    const PolicySegment& seg = segment_for(0.5 * (u + w));
    const Rates ru = rates_at(seg, u);
    const Rates rw = rates_at(seg, w);
    if (!sold_out) {
      const double ds = 0.5 * (ru.sales + rw.sales) * h;
      if (cs + ds >= stock && ds > 0.0) {
        // Cut the step at the (linearly interpolated) sell-out instant.
        const double theta = std::clamp((stock - cs) / ds, 0.0, 1.0);
        const double tx = u + theta * h;
        const Rates rx = rates_at(seg, tx);
        cn += 0.5 * (ru.nominal + rx.nominal) * (tx - u);
        co += 0.5 * (ru.objective + rx.objective) * (tx - u);
        cs = stock;
        sold_out = true;
      } else {
        cs += ds;
        cn += 0.5 * (ru.nominal + rw.nominal) * h;
        co += 0.5 * (ru.objective + rw.objective) * h;
      }
    }
    result.samples.push_back({w, rw.posted, rw.internal, cs, cn, co});
  }

  result.summary.final_sales = cs;
  result.summary.final_nominal_revenue = cn;
  result.summary.final_objective_revenue = co;
  const ConstraintSchedule& sched = s.schedule();
  for (std::size_t i = 1; i < sched.grid_size(); ++i) {
    const double tau = sched.tau(i);
    auto it = std::lower_bound(result.samples.begin(), result.samples.end(), tau,
                               [](const SimSample& smp, double val) { return smp.t < val; });
    const SimSample& at = (it == result.samples.end()) ? result.samples.back() : *it;
    result.summary.slacks.push_back({i, tau, at.cum_sales - sched.min_sales(i),
                                     at.cum_objective_revenue - sched.min_revenue(i)});
  }

  result.horizon = T;
  result.total_stock = stock;
  result.constraint_taus = sched.taus();
  return result;
}

/// Greedy baseline: on each grid interval price the immediately next
/// constraint exactly tight (the lower of its two tight prices when both
/// bounds impose something); with nothing imposed, spread the remaining stock
/// evenly to T.
inline PricingPolicy baseline_nearest_constraint(const Scenario& s) {
  const ConstraintSchedule& sched = s.schedule();
  const Propensity& v = s.propensity();
  const GridIntegrals grid(s);
  const std::size_t last = sched.last_index();

  std::vector<PolicySegment> segments;
  double acquired_sales = 0.0;
  double acquired_revenue = 0.0;  // objective value
  for (std::size_t i = 0; i < last; ++i) {
    const double t_i = sched.tau(i);
    const double t_n = sched.tau(i + 1);
    const double rs = sched.min_sales(i + 1) - acquired_sales;
    const double rr = sched.min_revenue(i + 1) - acquired_revenue;
    double price = std::numeric_limits<double>::infinity();
    if (rs > detail::residual_tolerance(sched.min_sales(i + 1)))
      price = std::min(price, tight_sales_price(s, t_i, t_n, rs));
    if (rr > detail::residual_tolerance(sched.min_revenue(i + 1))) {
      // Tight in objective value: p * v(p) * J_zeta = rr.
      const double per_unit = rr / grid.J(i, i + 1);
      if (per_unit > v.max_revenue_rate() * (1.0 + 1e-12))
        throw infeasible_error("nearest-constraint baseline: revenue bound unreachable",
                               {{i + 1, ConstraintKind::revenue, t_i, t_n, rr,
                                 v.max_revenue_rate() * grid.J(i, i + 1)}});
      price = std::min(price, v.invert_revenue_rate(std::min(per_unit, v.max_revenue_rate())));
    }
    if (!std::isfinite(price)) {
      const double remaining = sched.total_stock() - acquired_sales;
      if (remaining > detail::residual_tolerance(sched.total_stock())) {
        price = tight_sales_price(s, t_i, sched.horizon(), remaining);
      } else {
        price = std::isfinite(v.p_bar()) ? v.p_bar() * (1.0 - 1e-12) : v.p_star() * 1e6;
      }
    }
    segments.push_back({t_i, t_n, SegmentForm::constant_price, price});
    const double sold = v(price) * grid.K(i, i + 1);
    acquired_sales += sold;
    acquired_revenue += price * v(price) * grid.J(i, i + 1);
  }
  return PricingPolicy(std::move(segments), s.phi(), s.kappa(),
                       v.is_linear() ? v.linear_a() : std::numeric_limits<double>::quiet_NaN(),
                       v.is_linear() ? v.linear_b() : std::numeric_limits<double>::quiet_NaN());
}

enum class BlindMode { phi, kappa, both };

/// Solves the scenario with the ignored weight(s) replaced by the identity and
/// returns that policy; simulate it under the true scenario to measure what
/// ignorance costs.
inline PricingPolicy baseline_value_blind(const Scenario& s, BlindMode mode) {
  detail::require_linear(s, "baseline_value_blind");
  const ValueWeight unit = ValueWeight::constant(1.0);
  const ValueWeight& phi = (mode == BlindMode::kappa) ? s.phi() : unit;
  const ValueWeight& kappa = (mode == BlindMode::phi) ? s.kappa() : unit;
  Scenario blind(s.demand(), phi, kappa, s.propensity(), s.schedule());
  return solve_tvm_linear(blind).policy;
}

struct PolicyComparison {
  struct Row {
    std::string label;
    double final_sales;
    double final_objective_revenue;
    std::vector<ConstraintSlack> slacks;
  };
  struct Delta {
    std::string label_a, label_b;
    double relative;  // (R_a - R_b) / |R_b|
  };
  std::vector<Row> rows;
  std::vector<Delta> deltas;
};

/// Tabulates final objective revenues, all pairwise relative deltas, and the
/// per-tau constraint slacks. All results must come from the same scenario.
inline PolicyComparison compare(const std::vector<SimulationResult>& results) {
  if (results.size() < 2) throw validation_error("compare needs at least two results");
  for (const SimulationResult& r : results) {
    if (r.horizon != results[0].horizon || r.total_stock != results[0].total_stock ||
        r.constraint_taus != results[0].constraint_taus)
      throw validation_error("compare: results come from different scenarios");
  }
  PolicyComparison cmp;
  for (const SimulationResult& r : results)
    cmp.rows.push_back({r.label, r.summary.final_sales, r.summary.final_objective_revenue,
                        r.summary.slacks});
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      const double ra = results[i].summary.final_objective_revenue;
      const double rb = results[j].summary.final_objective_revenue;
      cmp.deltas.push_back({results[i].label, results[j].label,
                            (ra - rb) / std::max(std::abs(rb), 1e-300)});
    }
  }
  return cmp;
}

}  // namespace priceopt
