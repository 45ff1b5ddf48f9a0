#pragma once

// Feasible-by-construction scenario generators. Constraints are carved from
// the trajectory of a witness policy with prices in [p*, p_bar), so both
// feasibility assumptions hold: pricing at p* dominates the witness, and the
// witness itself finishes with S(T) = S.

#include <optional>
#include <random>
#include <vector>

#include "priceopt/quadrature.hpp"
#include "priceopt/scenario.hpp"

namespace priceopt::testing {

struct FuzzOptions {
  int min_intervals = 1;
  int max_intervals = 5;
  bool tvm_weights = false;           // draw non-unit phi/kappa
  bool stepwise_zeta = false;         // phi sampled, near-constant per cell
  bool sales_only = false;            // no revenue bounds
  bool single_witness_price = false;  // constant witness (else piecewise)
  // every intermediate sales bound sits exactly on the witness trajectory and
  // witness prices increase strictly, so each constraint binds in turn and the
  // optimum pins every cell price (no flat directions for grid searches)
  bool fully_binding = false;
  double max_horizon = 3.0;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline DemandCurve random_demand(std::mt19937_64& rng, double horizon) {
  const int pieces = uniform_int(rng, 1, 4);
  std::vector<DemandCurve::Point> pts;
  for (int i = 0; i <= pieces; ++i) {
    const double t = (i == pieces) ? horizon : horizon * static_cast<double>(i) / pieces;
    pts.push_back({t, uniform(rng, 0.3, 3.0)});
  }
  return DemandCurve(std::move(pts));
}

inline std::vector<double> random_taus(std::mt19937_64& rng, double horizon, int intervals) {
  std::vector<double> taus{0.0};
  for (int i = 1; i < intervals; ++i)
    taus.push_back(horizon * (static_cast<double>(i) + uniform(rng, -0.3, 0.3)) /
                   static_cast<double>(intervals));
  taus.push_back(horizon);
  return taus;
}

// Weight variation is capped (zeta ratio <= 2 overall) to stay on the branch
// where the multiplier price formula keeps the propensity non-negative; the
// model's closed forms presume p(t) stays within [p*, p_bar].
inline ValueWeight random_weight(std::mt19937_64& rng, double horizon) {
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      return ValueWeight::constant(uniform(rng, 0.5, 2.0));
    case 1:
      return ValueWeight::exponential_decay(uniform(rng, -0.34, 0.34) / horizon);
    case 2:
      return ValueWeight::linear(uniform(rng, -0.29, 0.41) / horizon);
    default: {
      std::vector<ValueWeight::Sample> pts;
      const int pieces = uniform_int(rng, 1, 3);
      for (int i = 0; i <= pieces; ++i) {
        const double t = (i == pieces) ? horizon : horizon * static_cast<double>(i) / pieces;
        pts.push_back({t, uniform(rng, 0.85, 1.2)});
      }
      return ValueWeight::sampled(std::move(pts));
    }
  }
}

// phi that is constant within each inter-constraint interval up to short
// linear ramps just before each boundary.
inline ValueWeight stepwise_weight(std::mt19937_64& rng, const std::vector<double>& taus) {
  double min_cell = taus[1] - taus[0];
  for (std::size_t i = 1; i + 1 < taus.size(); ++i)
    min_cell = std::min(min_cell, taus[i + 1] - taus[i]);
  const double ramp = 1e-3 * min_cell;
  std::vector<ValueWeight::Sample> pts;
  double level = uniform(rng, 0.75, 1.3);
  pts.push_back({0.0, level});
  for (std::size_t i = 1; i + 1 < taus.size(); ++i) {
    pts.push_back({taus[i] - ramp, level});
    level = uniform(rng, 0.75, 1.3);
    pts.push_back({taus[i], level});
  }
  pts.push_back({taus.back(), level});
  return ValueWeight::sampled(std::move(pts));
}

inline Scenario random_feasible_scenario(std::mt19937_64& rng, const FuzzOptions& opts = {}) {
  const double horizon = uniform(rng, 1.0, opts.max_horizon);
  const int intervals = uniform_int(rng, opts.min_intervals, opts.max_intervals);
  const std::vector<double> taus = random_taus(rng, horizon, intervals);

  DemandCurve demand = random_demand(rng, horizon);
  const double a = uniform(rng, 0.8, 1.6);
  const double b = uniform(rng, 0.9, 2.0);
  Propensity v = Propensity::linear(a, b);

  ValueWeight phi = ValueWeight::constant(1.0);
  ValueWeight kappa = ValueWeight::constant(1.0);
  if (opts.stepwise_zeta) {
    phi = stepwise_weight(rng, taus);
  } else if (opts.tvm_weights) {
    phi = random_weight(rng, horizon);
    if (uniform(rng, 0.0, 1.0) < 0.5) kappa = random_weight(rng, horizon);
  }

  // Witness prices per interval, kept off the extremes so tight prices stay
  // comfortably bracketed and multiplier segments stay on the valid branch.
  const double p_lo = v.p_star() * 1.02;
  const double p_hi = v.p_star() + (opts.tvm_weights || opts.stepwise_zeta ? 0.5 : 0.85) *
                                       (v.p_bar() - v.p_star());
  std::vector<double> witness(static_cast<std::size_t>(intervals));
  const double base = uniform(rng, p_lo, p_hi);
  for (double& p : witness)
    p = opts.single_witness_price ? base : uniform(rng, p_lo, p_hi);
  if (opts.fully_binding) {
    std::sort(witness.begin(), witness.end());
    for (std::size_t m = 1; m < witness.size(); ++m)  // keep ties well apart
      witness[m] = std::max(witness[m], witness[m - 1] + 0.02);
  }

  // Witness trajectory at each grid point.
  std::vector<double> cum_sales{0.0}, cum_revenue{0.0};
  for (int m = 0; m < intervals; ++m) {
    const double frac = v(witness[static_cast<std::size_t>(m)]);
    const double k = demand.integrate(taus[m], taus[m + 1]);
    const double j = integrate_J(demand, phi, kappa, taus[m], taus[m + 1]);
    cum_sales.push_back(cum_sales.back() + frac * k);
    cum_revenue.push_back(cum_revenue.back() +
                          witness[static_cast<std::size_t>(m)] * frac * j);
  }

  std::vector<ConstraintEntry> entries;
  for (int i = 1; i < intervals; ++i) {
    ConstraintEntry e;
    e.tau = taus[i];
    if (opts.fully_binding) {
      e.min_sales = cum_sales[static_cast<std::size_t>(i)];
      if (!opts.sales_only && uniform(rng, 0.0, 1.0) < 0.5)
        e.min_revenue = cum_revenue[static_cast<std::size_t>(i)] * uniform(rng, 0.3, 0.8);
      entries.push_back(e);
      continue;
    }
    const double roll = uniform(rng, 0.0, 1.0);
    // Mix loose, binding-at-witness, and absent bounds.
    if (roll < 0.4)
      e.min_sales = cum_sales[static_cast<std::size_t>(i)] * uniform(rng, 0.3, 0.999);
    else if (roll < 0.6)
      e.min_sales = cum_sales[static_cast<std::size_t>(i)];
    if (!opts.sales_only) {
      const double roll_r = uniform(rng, 0.0, 1.0);
      if (roll_r < 0.4)
        e.min_revenue = cum_revenue[static_cast<std::size_t>(i)] * uniform(rng, 0.3, 0.999);
      else if (roll_r < 0.6)
        e.min_revenue = cum_revenue[static_cast<std::size_t>(i)];
    }
    entries.push_back(e);
  }

  return Scenario(std::move(demand), std::move(phi), std::move(kappa), v,
                  ConstraintSchedule(horizon, cum_sales.back(), std::move(entries)));
}

}  // namespace priceopt::testing
