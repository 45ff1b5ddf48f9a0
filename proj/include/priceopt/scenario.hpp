#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "priceopt/demand.hpp"
#include "priceopt/errors.hpp"
#include "priceopt/propensity.hpp"
#include "priceopt/quadrature.hpp"
#include "priceopt/value_weight.hpp"

namespace priceopt {

/// One user-supplied constraint row; missing bounds default to zero.
struct ConstraintEntry {
  double tau = 0.0;
  std::optional<double> min_sales;
  std::optional<double> min_revenue;
};

/// Cumulative lower bounds on a common grid 0 = tau_0 < ... < tau_k = T.
/// The grid always carries the trivial bounds at tau_0 and the full stock as
/// the final sales bound (S_k = S).
class ConstraintSchedule {
 public:
  ConstraintSchedule(double horizon, double total_stock, std::vector<ConstraintEntry> entries)
      : stock_(total_stock) {
    if (!(horizon > 0.0)) throw validation_error("horizon must be positive");
    if (!(total_stock > 0.0)) throw validation_error("total stock must be positive");

    std::sort(entries.begin(), entries.end(),
              [](const ConstraintEntry& a, const ConstraintEntry& b) { return a.tau < b.tau; });
    taus_.push_back(0.0);
    min_sales_.push_back(0.0);
    min_revenue_.push_back(0.0);
    for (const ConstraintEntry& e : entries) {
      if (e.tau < 0.0 || e.tau > horizon)
        throw validation_error("constraint time outside [0, horizon]");
      const double s = e.min_sales.value_or(0.0);
      const double r = e.min_revenue.value_or(0.0);
      if (s < 0.0 || r < 0.0) throw validation_error("constraint bounds must be non-negative");
      if (e.tau == 0.0) {
        if (s != 0.0 || r != 0.0)
          throw validation_error("constraints at tau=0 must be trivial");
        continue;
      }
      if (e.tau == taus_.back())
        throw validation_error("duplicate constraint time");
      taus_.push_back(e.tau);
      min_sales_.push_back(s);
      min_revenue_.push_back(r);
    }
    if (taus_.back() != horizon) {
      taus_.push_back(horizon);
      min_sales_.push_back(total_stock);
      min_revenue_.push_back(0.0);
    } else {
      // An explicit final entry must agree with the stock (or leave it unset).
      double& final_sales = min_sales_.back();
      if (final_sales != 0.0 &&
          std::abs(final_sales - total_stock) > 1e-12 * std::max(1.0, total_stock))
        throw validation_error("final sales constraint must equal the total stock");
      final_sales = total_stock;
    }
  }

  std::size_t grid_size() const { return taus_.size(); }       // k+1 points
  std::size_t last_index() const { return taus_.size() - 1; }  // k
  double tau(std::size_t i) const { return taus_.at(i); }
  double min_sales(std::size_t i) const { return min_sales_.at(i); }
  double min_revenue(std::size_t i) const { return min_revenue_.at(i); }
  double total_stock() const { return stock_; }
  double horizon() const { return taus_.back(); }
  const std::vector<double>& taus() const { return taus_; }

 private:
  std::vector<double> taus_;
  std::vector<double> min_sales_;
  std::vector<double> min_revenue_;
  double stock_;
};

/// A full optimization instance. Immutable; all queries are pure.
///
/// Revenue bounds R_i are interpreted in objective value, i.e. against
/// zeta-weighted revenue (for the basic model zeta == 1 and this coincides
/// with nominal revenue).
class Scenario {
 public:
  Scenario(DemandCurve demand, ValueWeight phi, ValueWeight kappa, Propensity propensity,
           ConstraintSchedule schedule)
      : demand_(std::move(demand)),
        phi_(std::move(phi)),
        kappa_(std::move(kappa)),
        propensity_(std::move(propensity)),
        schedule_(std::move(schedule)) {
    const double T = schedule_.horizon();
    if (demand_.horizon() != T)
      throw validation_error("demand curve must cover exactly [0, horizon]");
    phi_.validate_on(T);
    kappa_.validate_on(T);
    for (std::size_t i = 0; i + 1 < schedule_.grid_size(); ++i) {
      if (!(demand_.integrate(schedule_.tau(i), schedule_.tau(i + 1)) > 0.0))
        throw validation_error("average demand must be positive on every constraint interval");
    }
    zeta_unit_ = probe_zeta_unit();
  }

  double horizon() const { return schedule_.horizon(); }
  const DemandCurve& demand() const { return demand_; }
  const ValueWeight& phi() const { return phi_; }
  const ValueWeight& kappa() const { return kappa_; }
  const Propensity& propensity() const { return propensity_; }
  const ConstraintSchedule& schedule() const { return schedule_; }

  double zeta(double t) const { return phi_(t) * kappa_(t); }
  bool zeta_is_unit() const { return zeta_unit_; }

 private:
  bool probe_zeta_unit() const {
    if (phi_.is_unit() && kappa_.is_unit()) return true;
    // No symbolic product form; a dense probe is enough to rule zeta == 1 in or out.
    const double T = horizon();
    for (int i = 0; i <= 257; ++i) {
      const double t = T * i / 257.0;
      if (std::abs(zeta(t) - 1.0) > 1e-12) return false;
    }
    return true;
  }

  DemandCurve demand_;
  ValueWeight phi_;
  ValueWeight kappa_;
  Propensity propensity_;
  ConstraintSchedule schedule_;
  bool zeta_unit_ = false;
};

/// Per-cell K, I_zeta, J_zeta between consecutive grid times, with prefix sums.
/// Built once per solve; read-only afterwards.
class GridIntegrals {
 public:
  explicit GridIntegrals(const Scenario& s) {
    const ConstraintSchedule& g = s.schedule();
    const std::size_t cells = g.last_index();
    prefix_k_.assign(cells + 1, 0.0);
    prefix_i_.assign(cells + 1, 0.0);
    prefix_j_.assign(cells + 1, 0.0);
    for (std::size_t m = 0; m < cells; ++m) {
      const double a = g.tau(m), b = g.tau(m + 1);
      prefix_k_[m + 1] = prefix_k_[m] + s.demand().integrate(a, b);
      prefix_i_[m + 1] = prefix_i_[m] + integrate_I(s.demand(), s.phi(), s.kappa(), a, b);
      prefix_j_[m + 1] = prefix_j_[m] + integrate_J(s.demand(), s.phi(), s.kappa(), a, b);
    }
  }

  double K(std::size_t i, std::size_t j) const { return prefix_k_.at(j) - prefix_k_.at(i); }
  double I(std::size_t i, std::size_t j) const { return prefix_i_.at(j) - prefix_i_.at(i); }
  double J(std::size_t i, std::size_t j) const { return prefix_j_.at(j) - prefix_j_.at(i); }

 private:
  std::vector<double> prefix_k_, prefix_i_, prefix_j_;
};

struct FeasibilityReport {
  std::vector<InfeasibilityDetail> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the standing feasibility assumptions: pricing at p* forever must
/// meet every sales bound, every (objective) revenue bound, and be able to
/// move the whole stock by T.
inline FeasibilityReport check_feasibility(const Scenario& s) {
  FeasibilityReport report;
  const GridIntegrals g(s);
  const ConstraintSchedule& sched = s.schedule();
  const double v_star = s.propensity().max_sales_fraction();
  const double r_star = s.propensity().max_revenue_rate();
  for (std::size_t i = 1; i < sched.grid_size(); ++i) {
    const double sales_cap = v_star * g.K(0, i);
    const double required_sales = sched.min_sales(i);
    if (required_sales - sales_cap > 1e-12 * std::max(1.0, required_sales))
      report.violations.push_back({i, ConstraintKind::sales, 0.0, sched.tau(i),
                                   required_sales, sales_cap});
    const double revenue_cap = r_star * g.J(0, i);
    const double required_revenue = sched.min_revenue(i);
    if (required_revenue - revenue_cap > 1e-12 * std::max(1.0, required_revenue))
      report.violations.push_back({i, ConstraintKind::revenue, 0.0, sched.tau(i),
                                   required_revenue, revenue_cap});
  }
  return report;
}

struct Residual {
  std::size_t index;
  double sales;
  double revenue;
};

/// Remaining requirements S_k - acquired and R_k - acquired for all k > i,
/// clipped below at zero.
inline std::vector<Residual> residuals(const Scenario& s, double acquired_sales,
                                       double acquired_revenue, std::size_t i) {
  const ConstraintSchedule& sched = s.schedule();
  if (i >= sched.last_index()) throw std::out_of_range("grid index out of range");
  std::vector<Residual> out;
  out.reserve(sched.last_index() - i);
  for (std::size_t k = i + 1; k < sched.grid_size(); ++k) {
    out.push_back({k, std::max(0.0, sched.min_sales(k) - acquired_sales),
                   std::max(0.0, sched.min_revenue(k) - acquired_revenue)});
  }
  return out;
}

}  // namespace priceopt
