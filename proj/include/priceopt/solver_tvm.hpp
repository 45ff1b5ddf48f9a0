#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "priceopt/policy.hpp"
#include "priceopt/quadrature.hpp"
#include "priceopt/scenario.hpp"
#include "priceopt/solver_basic.hpp"

namespace priceopt {

/// One multiplier segment: price p_q(t) = (a/b - q/zeta(t)) / 2 on [t_start, t_end).
struct TvmSegment {
  double q;
  double t_start;
  double t_end;
};

namespace detail {

// Positive q up to this absolute size is floating-point noise and means "price p*".
constexpr double kQNoise = 1e-12;

inline void require_linear(const Scenario& s, const char* op) {
  if (!s.propensity().is_linear())
    throw std::domain_error(std::string(op) + " requires the linear propensity form");
}

struct ZetaIntegrals {
  double k, i, j;
};

inline ZetaIntegrals zeta_integrals(const Scenario& s, double t1, double t2) {
  return {s.demand().integrate(t1, t2), integrate_I(s.demand(), s.phi(), s.kappa(), t1, t2),
          integrate_J(s.demand(), s.phi(), s.kappa(), t1, t2)};
}

inline double q_sales_from(double a, double b, double residual_sales, double k, double i_zeta,
                           double t1, double t2) {
  const double q = (2.0 * residual_sales - a * k) / (b * i_zeta);
  if (q > kQNoise)
    throw infeasible_error("sales bound exceeds the p* capacity of the interval",
                           {{0, ConstraintKind::sales, t1, t2, residual_sales, 0.5 * a * k}});
  return std::min(q, 0.0);
}

inline double q_revenue_from(double a, double b, double residual_revenue, double j_zeta,
                             double i_zeta, double t1, double t2) {
  const double cap = a * a * j_zeta / (4.0 * b);
  double num = a * a * j_zeta - 4.0 * residual_revenue * b;
  if (num < 0.0) {
    if (-num > kQNoise * std::max(1.0, a * a * j_zeta))
      throw infeasible_error("revenue bound exceeds the p* capacity of the interval",
                             {{0, ConstraintKind::revenue, t1, t2, residual_revenue, cap}});
    num = 0.0;
  }
  return -std::sqrt(num / (b * b * i_zeta));
}

// Closed-form deltas for a multiplier segment, given the interval integrals.
inline double segment_sales(double a, double b, double q, double k, double i_zeta) {
  return 0.5 * a * k + 0.5 * q * b * i_zeta;
}
inline double segment_objective_revenue(double a, double b, double q, double j_zeta,
                                        double i_zeta) {
  return (a * a / (4.0 * b)) * j_zeta - (q * q * b / 4.0) * i_zeta;
}

}  // namespace detail

/// Multiplier delivering exactly `residual_sales` over [t_i, t_k]:
/// q = (2S - a K) / (b I_zeta).
inline double q_sales(const Scenario& s, double t_i, double t_k, double residual_sales) {
  detail::require_linear(s, "q_sales");
  if (!(t_i < t_k)) throw std::out_of_range("q_sales needs t_i < t_k");
  if (residual_sales < 0.0) throw std::domain_error("residual sales must be non-negative");
  const auto zi = detail::zeta_integrals(s, t_i, t_k);
  return detail::q_sales_from(s.propensity().linear_a(), s.propensity().linear_b(),
                              residual_sales, zi.k, zi.i, t_i, t_k);
}

/// Multiplier delivering exactly `residual_revenue` of objective revenue:
/// q = -sqrt((a^2 J_zeta - 4Rb) / (b^2 I_zeta)).
inline double q_revenue(const Scenario& s, double t_i, double t_k, double residual_revenue) {
  detail::require_linear(s, "q_revenue");
  if (!(t_i < t_k)) throw std::out_of_range("q_revenue needs t_i < t_k");
  if (residual_revenue < 0.0) throw std::domain_error("residual revenue must be non-negative");
  const auto zi = detail::zeta_integrals(s, t_i, t_k);
  return detail::q_revenue_from(s.propensity().linear_a(), s.propensity().linear_b(),
                                residual_revenue, zi.j, zi.i, t_i, t_k);
}

struct PricePoint {
  double internal_price;
  double posted_price;
  double propensity;
};

/// Evaluates the multiplier price formula at time t. q = 0 gives p*.
inline PricePoint price_from_q(const Scenario& s, double q, double t) {
  detail::require_linear(s, "price_from_q");
  if (q > detail::kQNoise) throw std::domain_error("multiplier must be non-positive");
  q = std::min(q, 0.0);
  const double zeta = s.zeta(t);
  if (!(zeta > 0.0)) throw std::domain_error("zeta must be positive");
  const double a = s.propensity().linear_a();
  const double b = s.propensity().linear_b();
  const double internal = 0.5 * (a / b - q / zeta);
  return {internal, s.kappa()(t) * internal, 0.5 * (a + q * b / zeta)};
}

/// Max-revenue segment selling exactly `sales_target` over [t_i, t_k].
inline TvmSegment solve_interval_max_revenue(const Scenario& s, double t_i, double t_k,
                                             double sales_target) {
  return {q_sales(s, t_i, t_k, sales_target), t_i, t_k};
}

/// Min-sales segment earning exactly `revenue_target` (dual problem).
inline TvmSegment solve_interval_min_sales(const Scenario& s, double t_i, double t_k,
                                           double revenue_target) {
  return {q_revenue(s, t_i, t_k, revenue_target), t_i, t_k};
}

/// Iterative optimal policy under the generalized TVM weight zeta = phi*kappa,
/// linear propensity only.
///
/// Mirrors solve_basic with multipliers: at each grid point take the maximal q
/// over all positive-residual future bounds (p_q(t) is decreasing in q, so max
/// q is min price), extend to the latest binding constraint, update acquired
/// sales and objective revenue in closed form from the cached I/J/K tables.
inline SolveResult solve_tvm_linear(const Scenario& s) {
  detail::require_linear(s, "solve_tvm_linear");
  {
    FeasibilityReport report = check_feasibility(s);
    if (!report.ok())
      throw infeasible_error("scenario violates the p* feasibility assumptions",
                             report.violations);
  }

  const ConstraintSchedule& sched = s.schedule();
  const double a = s.propensity().linear_a();
  const double b = s.propensity().linear_b();
  const std::size_t last = sched.last_index();
  const GridIntegrals grid(s);

  std::vector<PolicySegment> segments;
  SolveTrace trace;
  double acquired_sales = 0.0;
  double acquired_revenue = 0.0;
  std::size_t i = 0;

  while (i < last) {
    const double t_i = sched.tau(i);
    std::vector<SolveCandidate> candidates;
    for (std::size_t k = i + 1; k <= last; ++k) {
      const double t_k = sched.tau(k);
      const double rs = sched.min_sales(k) - acquired_sales;
      if (rs > detail::residual_tolerance(sched.min_sales(k))) {
        const double q = detail::q_sales_from(a, b, rs, grid.K(i, k), grid.I(i, k), t_i, t_k);
        candidates.push_back({k, ConstraintKind::sales, price_from_q(s, q, t_i).internal_price, q});
      }
      const double rr = sched.min_revenue(k) - acquired_revenue;
      if (rr > detail::residual_tolerance(sched.min_revenue(k))) {
        const double q = detail::q_revenue_from(a, b, rr, grid.J(i, k), grid.I(i, k), t_i, t_k);
        candidates.push_back({k, ConstraintKind::revenue, price_from_q(s, q, t_i).internal_price, q});
      }
    }

    if (candidates.empty()) {
      const double cap_price = s.propensity().p_bar() * (1.0 - 1e-12);
      segments.push_back({t_i, sched.horizon(), SegmentForm::constant_price, cap_price});
      trace.steps.push_back({t_i, sched.horizon(), i, last, ConstraintKind::sales,
                             acquired_sales, acquired_revenue, {}});
      break;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (const SolveCandidate& c : candidates) best = std::max(best, c.q);
    const std::size_t pick = detail::pick_binding(candidates, [best](const SolveCandidate& c) {
      return c.q >= best - 1e-12 * std::max(1.0, std::abs(best));
    });
    const SolveCandidate& binding = candidates[pick];
    const std::size_t j = binding.constraint_index;
    const double q = binding.q;

    segments.push_back({t_i, sched.tau(j), SegmentForm::tvm_multiplier, q});
    trace.steps.push_back({t_i, sched.tau(j), i, j, binding.kind, acquired_sales,
                           acquired_revenue, std::move(candidates)});

    acquired_sales += detail::segment_sales(a, b, q, grid.K(i, j), grid.I(i, j));
    acquired_revenue += detail::segment_objective_revenue(a, b, q, grid.J(i, j), grid.I(i, j));
    i = j;
  }

  const double stock = sched.total_stock();
  if (std::abs(acquired_sales - stock) > 1e-8 * std::max(1.0, stock))
    throw infeasible_error(
        "scenario is over-constrained: the constructed policy cannot finish with S(T) = S",
        {{last, ConstraintKind::sales, 0.0, sched.horizon(), stock, acquired_sales}});

  return {PricingPolicy(std::move(segments), s.phi(), s.kappa(), a, b), std::move(trace)};
}

struct PolicyTotals {
  double sales;
  double objective_revenue;
};

/// Closed-form totals of a policy solved against this scenario (segment
/// bookkeeping, no time discretization). Constant segments use exact K/J
/// integrals; multiplier segments the I/J/K forms.
inline PolicyTotals policy_totals(const Scenario& s, const PricingPolicy& policy) {
  double sales = 0.0;
  double revenue = 0.0;
  for (const PolicySegment& seg : policy.segments()) {
    const auto zi = detail::zeta_integrals(s, seg.t_start, seg.t_end);
    if (seg.form == SegmentForm::constant_price) {
      const double frac = s.propensity()(seg.value);
      sales += frac * zi.k;
      revenue += seg.value * frac * zi.j;
    } else {
      const double a = s.propensity().linear_a();
      const double b = s.propensity().linear_b();
      sales += detail::segment_sales(a, b, seg.value, zi.k, zi.i);
      revenue += detail::segment_objective_revenue(a, b, seg.value, zi.j, zi.i);
    }
  }
  return {sales, revenue};
}

}  // namespace priceopt
