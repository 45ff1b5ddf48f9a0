#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "priceopt/demand.hpp"
#include "priceopt/errors.hpp"
#include "priceopt/value_weight.hpp"

namespace priceopt {
namespace detail {

// Composite Simpson with interval doubling on one smooth piece. The integrands
// here are piecewise-linear demand times a smooth weight, so between
// breakpoints this converges in a handful of doublings (and is exact for the
// Lambda*linear-weight case).
template <class F>
double simpson_refine(F&& f, double lo, double hi, double rel_tol, long max_intervals) {
  if (lo >= hi) return 0.0;
  long n = 2;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  double mid_sum = f(0.5 * (lo + hi));        // odd-node sum at current n
  double even_sum = 0.0;                      // interior even-node sum
  double h = 0.5 * (hi - lo);
  double estimate = (h / 3.0) * (f_lo + f_hi + 4.0 * mid_sum);
  while (n < max_intervals) {
    even_sum += mid_sum;
    n *= 2;
    h *= 0.5;
    mid_sum = 0.0;
    for (long i = 1; i < n; i += 2) mid_sum += f(lo + i * h);
    const double next = (h / 3.0) * (f_lo + f_hi + 2.0 * even_sum + 4.0 * mid_sum);
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (diff <= rel_tol * std::abs(next) + 1e-300) break;
  }
  return estimate;
}

// Integrates `f` over [t1, t2] splitting at the given interior breakpoints.
template <class F>
double integrate_piecewise(F&& f, double t1, double t2, std::vector<double> breaks) {
  breaks.push_back(t1);
  breaks.push_back(t2);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  constexpr double kRelTol = 1e-9;
  constexpr long kMaxIntervals = 1L << 22;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i] < t1 || breaks[i + 1] > t2) continue;
    total += simpson_refine(f, breaks[i], breaks[i + 1], kRelTol, kMaxIntervals);
  }
  return total;
}

inline std::vector<double> merged_breakpoints(const DemandCurve& demand, const ValueWeight& w,
                                              double t1, double t2) {
  std::vector<double> breaks = demand.interior_breakpoints(t1, t2);
  w.append_interior_breakpoints(t1, t2, breaks);
  return breaks;
}

}  // namespace detail

/// I(t1, t2) = integral of Lambda(t)/w(t), to 1e-9 relative.
inline double integrate_I(const DemandCurve& demand, const ValueWeight& w, double t1, double t2) {
  if (!(t1 >= 0.0 && t2 <= demand.horizon() && t1 <= t2))
    throw std::out_of_range("integration interval outside [0, horizon]");
  return detail::integrate_piecewise(
      [&](double t) {
        const double wt = w(t);
        if (!(wt > 0.0)) throw std::domain_error("value weight must be positive on the interval");
        return demand.rate(t) / wt;
      },
      t1, t2, detail::merged_breakpoints(demand, w, t1, t2));
}

/// J(t1, t2) = integral of Lambda(t)*w(t), to 1e-9 relative.
inline double integrate_J(const DemandCurve& demand, const ValueWeight& w, double t1, double t2) {
  if (!(t1 >= 0.0 && t2 <= demand.horizon() && t1 <= t2))
    throw std::out_of_range("integration interval outside [0, horizon]");
  return detail::integrate_piecewise(
      [&](double t) {
        const double wt = w(t);
        if (!(wt > 0.0)) throw std::domain_error("value weight must be positive on the interval");
        return demand.rate(t) * wt;
      },
      t1, t2, detail::merged_breakpoints(demand, w, t1, t2));
}

/// Product-weight variants for zeta(t) = phi(t)*kappa(t).
inline double integrate_I(const DemandCurve& demand, const ValueWeight& phi,
                          const ValueWeight& kappa, double t1, double t2) {
  if (!(t1 >= 0.0 && t2 <= demand.horizon() && t1 <= t2))
    throw std::out_of_range("integration interval outside [0, horizon]");
  auto breaks = detail::merged_breakpoints(demand, phi, t1, t2);
  kappa.append_interior_breakpoints(t1, t2, breaks);
  return detail::integrate_piecewise(
      [&](double t) { return demand.rate(t) / (phi(t) * kappa(t)); }, t1, t2, std::move(breaks));
}

inline double integrate_J(const DemandCurve& demand, const ValueWeight& phi,
                          const ValueWeight& kappa, double t1, double t2) {
  if (!(t1 >= 0.0 && t2 <= demand.horizon() && t1 <= t2))
    throw std::out_of_range("integration interval outside [0, horizon]");
  auto breaks = detail::merged_breakpoints(demand, phi, t1, t2);
  kappa.append_interior_breakpoints(t1, t2, breaks);
  return detail::integrate_piecewise(
      [&](double t) { return demand.rate(t) * phi(t) * kappa(t); }, t1, t2, std::move(breaks));
}

}  // namespace priceopt
