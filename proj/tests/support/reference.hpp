#pragma once

// Test-only reference numerics, kept independent of the library's quadrature
// and closed-form bookkeeping: plain fine-grid trapezoid sums. Policy numbers
// are accumulated segment by segment so price jumps never sit inside a
// trapezoid panel.

#include <algorithm>
#include <cmath>

#include "priceopt/policy.hpp"
#include "priceopt/scenario.hpp"

namespace priceopt::testing {

template <class F>
double trapezoid(F&& f, double t1, double t2, long n = 1 << 17) {
  if (t2 <= t1) return 0.0;
  const double h = (t2 - t1) / static_cast<double>(n);
  double sum = 0.5 * (f(t1) + f(t2));
  for (long i = 1; i < n; ++i) sum += f(t1 + h * static_cast<double>(i));
  return sum * h;
}

inline double segment_sales(const Scenario& s, const PricingPolicy& policy,
                            const PolicySegment& seg, long n = 1 << 17) {
  return trapezoid(
      [&](double t) {
        return s.propensity()(policy.posted_price_in(seg, t) / s.kappa()(t)) *
               s.demand().rate(t);
      },
      seg.t_start, seg.t_end, n);
}

inline double segment_objective_revenue(const Scenario& s, const PricingPolicy& policy,
                                        const PolicySegment& seg, long n = 1 << 17) {
  return trapezoid(
      [&](double t) {
        const double posted = policy.posted_price_in(seg, t);
        return s.phi()(t) * posted * s.propensity()(posted / s.kappa()(t)) *
               s.demand().rate(t);
      },
      seg.t_start, seg.t_end, n);
}

inline double forward_sales(const Scenario& s, const PricingPolicy& policy, long n = 1 << 17) {
  double total = 0.0;
  for (const PolicySegment& seg : policy.segments()) total += segment_sales(s, policy, seg, n);
  return total;
}

inline double forward_objective_revenue(const Scenario& s, const PricingPolicy& policy,
                                        long n = 1 << 17) {
  double total = 0.0;
  for (const PolicySegment& seg : policy.segments())
    total += segment_objective_revenue(s, policy, seg, n);
  return total;
}

}  // namespace priceopt::testing
