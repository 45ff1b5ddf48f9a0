#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "priceopt/policy.hpp"
#include "priceopt/scenario.hpp"

namespace priceopt {

namespace detail {

inline double residual_tolerance(double bound) { return 1e-9 * std::max(1.0, bound); }

// Latest constraint attaining the best value within a relative tie window;
// ties are extended as far as possible so earlier tied constraints are met en
// route.
template <class Tied>
std::size_t pick_binding(const std::vector<SolveCandidate>& candidates, Tied&& tied) {
  std::size_t binding = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!tied(candidates[c])) continue;
    if (binding == candidates.size() ||
        candidates[c].constraint_index >= candidates[binding].constraint_index)
      binding = c;
  }
  return binding;
}

}  // namespace detail

/// Constant price making the sales bound over [t_i, t_k] exactly tight:
/// v(p) * K(t_i, t_k) = residual_sales.
inline double tight_sales_price(const Scenario& s, double t_i, double t_k,
                                double residual_sales) {
  if (!(t_i < t_k)) throw std::out_of_range("tight price needs t_i < t_k");
  const double k = s.demand().integrate(t_i, t_k);
  if (!(k > 0.0)) throw std::domain_error("no demand on the interval");
  const double target = residual_sales / k;
  const double cap = s.propensity().max_sales_fraction();
  if (target > cap * (1.0 + 1e-12))
    throw infeasible_error("sales bound exceeds the p* capacity of the interval",
                           {{0, ConstraintKind::sales, t_i, t_k, residual_sales, cap * k}});
  return s.propensity().invert_sales_rate(std::min(target, cap));
}

/// Constant price (above p*) making the revenue bound exactly tight:
/// p * v(p) * K(t_i, t_k) = residual_revenue. Basic model, zeta == 1.
inline double tight_revenue_price(const Scenario& s, double t_i, double t_k,
                                  double residual_revenue) {
  if (!(t_i < t_k)) throw std::out_of_range("tight price needs t_i < t_k");
  const double k = s.demand().integrate(t_i, t_k);
  if (!(k > 0.0)) throw std::domain_error("no demand on the interval");
  const double target = residual_revenue / k;
  const double cap = s.propensity().max_revenue_rate();
  if (target > cap * (1.0 + 1e-12))
    throw infeasible_error("revenue bound exceeds the p* capacity of the interval",
                           {{0, ConstraintKind::revenue, t_i, t_k, residual_revenue, cap * k}});
  return s.propensity().invert_revenue_rate(std::min(target, cap));
}

/// Iterative most-stringent-constraint construction of the optimal piecewise
/// constant policy (valid for any piecewise-continuous demand; only average
/// demand per interval enters).
///
/// At each grid point the tight price is computed for every future bound with
/// a positive residual; the minimum is the next segment's price and the
/// (latest) minimizing constraint its end. Acquired sales/revenue are tracked
/// in closed form, so binding constraints land exactly.
inline SolveResult solve_basic(const Scenario& s) {
  if (!s.zeta_is_unit())
    throw std::domain_error("solve_basic requires zeta == 1; use solve_tvm_linear");
  {
    FeasibilityReport report = check_feasibility(s);
    if (!report.ok())
      throw infeasible_error("scenario violates the p* feasibility assumptions",
                             report.violations);
  }

  const ConstraintSchedule& sched = s.schedule();
  const Propensity& v = s.propensity();
  const std::size_t last = sched.last_index();

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
        try {
          candidates.push_back({k, ConstraintKind::sales, tight_sales_price(s, t_i, t_k, rs),
                                std::numeric_limits<double>::quiet_NaN()});
        } catch (const infeasible_error&) {
          throw infeasible_error("interval over-constrained: sales bound unreachable above p*",
                                 {{k, ConstraintKind::sales, t_i, t_k, rs,
                                   v.max_sales_fraction() * s.demand().integrate(t_i, t_k)}});
        }
      }
      const double rr = sched.min_revenue(k) - acquired_revenue;
      if (rr > detail::residual_tolerance(sched.min_revenue(k))) {
        try {
          candidates.push_back({k, ConstraintKind::revenue, tight_revenue_price(s, t_i, t_k, rr),
                                std::numeric_limits<double>::quiet_NaN()});
        } catch (const infeasible_error&) {
          throw infeasible_error("interval over-constrained: revenue bound unreachable above p*",
                                 {{k, ConstraintKind::revenue, t_i, t_k, rr,
                                   v.max_revenue_rate() * s.demand().integrate(t_i, t_k)}});
        }
      }
    }

    if (candidates.empty()) {
      // Stock exhausted early; hold the price just under p_bar so nothing more sells.
      const double cap_price = std::isfinite(v.p_bar()) ? v.p_bar() * (1.0 - 1e-12)
                                                        : v.p_star() * 1e6;
      segments.push_back({t_i, sched.horizon(), SegmentForm::constant_price, cap_price});
      trace.steps.push_back({t_i, sched.horizon(), i, last, ConstraintKind::sales,
                             acquired_sales, acquired_revenue, {}});
      break;
    }

    double best = std::numeric_limits<double>::infinity();
    for (const SolveCandidate& c : candidates) best = std::min(best, c.price);
    const std::size_t pick = detail::pick_binding(candidates, [best](const SolveCandidate& c) {
      return c.price <= best + 1e-12 * std::max(1.0, best);
    });
    const SolveCandidate& binding = candidates[pick];
    const std::size_t j = binding.constraint_index;
    const double t_j = sched.tau(j);
    const double price = binding.price;

    segments.push_back({t_i, t_j, SegmentForm::constant_price, price});
    trace.steps.push_back({t_i, t_j, i, j, binding.kind, acquired_sales, acquired_revenue,
                           std::move(candidates)});

    const double sold = v(price) * s.demand().integrate(t_i, t_j);
    acquired_sales += sold;
    acquired_revenue += price * sold;
    i = j;
  }

  const double stock = sched.total_stock();
  if (std::abs(acquired_sales - stock) > 1e-8 * std::max(1.0, stock))
    throw infeasible_error(
        "scenario is over-constrained: the constructed policy cannot finish with S(T) = S",
        {{last, ConstraintKind::sales, 0.0, sched.horizon(), stock, acquired_sales}});

  return {PricingPolicy(std::move(segments), s.phi(), s.kappa(),
                        v.is_linear() ? v.linear_a() : std::numeric_limits<double>::quiet_NaN(),
                        v.is_linear() ? v.linear_b() : std::numeric_limits<double>::quiet_NaN()),
          std::move(trace)};
}

}  // namespace priceopt
