#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "priceopt/policy.hpp"
#include "priceopt/scenario.hpp"

namespace priceopt {

/// Uniform grid over per-interval prices (or multipliers q).
struct GridSearchSpec {
  double min;
  double max;
  double step;
};

struct OracleResult {
  bool feasible_found = false;
  double best_objective = -std::numeric_limits<double>::infinity();
  std::vector<double> assignment;  // one value per inter-constraint interval
};

namespace detail {

constexpr double kOracleEvalBudget = 1e8;

inline std::vector<double> grid_values(const GridSearchSpec& spec) {
  if (!(spec.step > 0.0) || !(spec.max >= spec.min))
    throw validation_error("grid spec needs min <= max and step > 0");
  std::vector<double> vals;
  const long n = static_cast<long>(std::floor((spec.max - spec.min) / spec.step + 1e-9));
  vals.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) vals.push_back(spec.min + static_cast<double>(i) * spec.step);
  return vals;
}

inline void check_budget(std::size_t grid_points, std::size_t intervals) {
  double evals = 1.0;
  for (std::size_t i = 0; i < intervals; ++i) evals *= static_cast<double>(grid_points);
  if (evals > kOracleEvalBudget)
    throw enumeration_limit_error("grid enumeration exceeds the evaluation budget");
}

inline double bound_tol(double bound) { return 1e-9 * std::max(1.0, bound); }

// Depth-first lexicographic enumeration with prefix pruning. `deltas(cell, i)`
// returns the closed-form (sales, revenue) increment of grid value i on the
// cell, or nullopt when the value is inadmissible there. Intermediate lower
// bounds are checked as each prefix completes; the stock equality S(T) = S is
// certified as the one-sided cap S(T) <= S, since a finite grid cannot hit an
// equality and under the p* feasibility assumption the revenue maximum
// saturates the stock from below, making the relaxation share its optimum
// with the exact problem. Strict improvement keeps the lexicographically
// smallest argmax.
template <class Deltas>
void enumerate(const ConstraintSchedule& sched, const std::vector<double>& values,
               std::size_t cell, double cumS, double cumR, std::vector<double>& current,
               const Deltas& deltas, OracleResult& best) {
  const std::size_t cells = sched.last_index();
  if (cell == cells) {
    if (cumR > best.best_objective) {
      best.best_objective = cumR;
      best.assignment = current;
      best.feasible_found = true;
    }
    return;
  }
  const std::size_t boundary = cell + 1;
  const bool final_boundary = boundary == cells;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto d = deltas(cell, i);
    if (!d) continue;
    const double nextS = cumS + d->first;
    const double nextR = cumR + d->second;
    if (nextS > sched.total_stock() + bound_tol(sched.total_stock())) continue;
    if (!final_boundary &&
        nextS < sched.min_sales(boundary) - bound_tol(sched.min_sales(boundary)))
      continue;
    if (nextR < sched.min_revenue(boundary) - bound_tol(sched.min_revenue(boundary)))
      continue;
    current.push_back(values[i]);
    enumerate(sched, values, cell + 1, nextS, nextR, current, deltas, best);
    current.pop_back();
  }
}

}  // namespace detail

/// Exhaustive search over piecewise-constant prices on the constraint grid
/// (zeta == 1, at most 3 intervals), with closed-form bookkeeping per interval.
inline OracleResult best_piecewise_constant(const Scenario& s, const GridSearchSpec& spec) {
  if (!s.zeta_is_unit())
    throw std::domain_error("best_piecewise_constant requires zeta == 1");
  const ConstraintSchedule& sched = s.schedule();
  const std::size_t cells = sched.last_index();
  if (cells > 3) throw validation_error("price oracle supports at most 3 intervals");
  const std::vector<double> prices = detail::grid_values(spec);
  detail::check_budget(prices.size(), cells);

  std::vector<double> cellK(cells);
  for (std::size_t m = 0; m < cells; ++m)
    cellK[m] = s.demand().integrate(sched.tau(m), sched.tau(m + 1));

  const Propensity& v = s.propensity();
  std::vector<double> frac(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) frac[i] = v(prices[i]);

  OracleResult best;
  std::vector<double> current;
  auto deltas = [&](std::size_t cell, std::size_t i) -> std::optional<std::pair<double, double>> {
    const double ds = frac[i] * cellK[cell];
    return std::pair<double, double>(ds, prices[i] * ds);
  };
  detail::enumerate(sched, prices, 0, 0.0, 0.0, current, deltas, best);
  return best;
}

/// Exhaustive search over per-interval multipliers q (linear propensity, at
/// most 2 intervals), bookkeeping through the cached I/J/K tables.
inline OracleResult best_piecewise_q(const Scenario& s, const GridSearchSpec& spec) {
  if (!s.propensity().is_linear())
    throw std::domain_error("best_piecewise_q requires the linear propensity form");
  const ConstraintSchedule& sched = s.schedule();
  const std::size_t cells = sched.last_index();
  if (cells > 2) throw validation_error("multiplier oracle supports at most 2 intervals");
  if (spec.max > 0.0) throw validation_error("multiplier grid must satisfy q <= 0");
  const std::vector<double> qs = detail::grid_values(spec);
  detail::check_budget(qs.size(), cells);

  const GridIntegrals grid(s);
  const double a = s.propensity().linear_a();
  const double b = s.propensity().linear_b();

  // Keep prices within [p*, p_bar]: q below -(a/b)*min zeta(cell) pushes the
  // propensity negative somewhere and the closed forms stop meaning sales.
  std::vector<double> q_floor(cells);
  for (std::size_t m = 0; m < cells; ++m) {
    double zmin = std::numeric_limits<double>::infinity();
    const double t0 = sched.tau(m), t1 = sched.tau(m + 1);
    for (int i = 0; i <= 64; ++i)
      zmin = std::min(zmin, s.zeta(t0 + (t1 - t0) * i / 64.0));
    q_floor[m] = -(a / b) * zmin * (1.0 + 1e-12);
  }

  OracleResult best;
  std::vector<double> current;
  auto deltas = [&](std::size_t cell, std::size_t i) -> std::optional<std::pair<double, double>> {
    const double q = qs[i];
    if (q < q_floor[cell]) return std::nullopt;
    const double ds = 0.5 * a * grid.K(cell, cell + 1) + 0.5 * q * b * grid.I(cell, cell + 1);
    const double dr = (a * a / (4.0 * b)) * grid.J(cell, cell + 1) -
                      (q * q * b / 4.0) * grid.I(cell, cell + 1);
    return std::pair<double, double>(ds, dr);
  };
  detail::enumerate(sched, qs, 0, 0.0, 0.0, current, deltas, best);
  return best;
}

}  // namespace priceopt
