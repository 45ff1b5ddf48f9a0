#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "priceopt/errors.hpp"

namespace priceopt {

/// Total demand rate Lambda(t): customers/day, piecewise linear on [0, horizon].
///
/// Integrals of Lambda are exact (trapezoid per linear piece), so cumulative
/// sales bookkeeping downstream carries no quadrature error.
class DemandCurve {
 public:
  struct Point {
    double t;
    double rate;
  };

  explicit DemandCurve(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw validation_error("demand curve needs at least two breakpoints");
    if (points_.front().t != 0.0) throw validation_error("demand curve must start at t=0");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i].rate >= 0.0))
        throw validation_error("demand rate must be non-negative and finite");
      if (i > 0 && !(points_[i].t > points_[i - 1].t))
        throw validation_error("demand breakpoint times must be strictly increasing");
    }
  }

  double horizon() const { return points_.back().t; }

  double rate(double t) const {
    check_range(t, t);
    const std::size_t i = segment_index(t);
    return interpolate(i, t);
  }

  /// K(t1, t2) = integral of Lambda over [t1, t2], closed form. K(t, t) = 0.
  double integrate(double t1, double t2) const {
    check_range(t1, t2);
    if (t1 == t2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      const double lo = std::max(t1, points_[i].t);
      const double hi = std::min(t2, points_[i + 1].t);
      if (lo >= hi) continue;
      total += 0.5 * (interpolate(i, lo) + interpolate(i, hi)) * (hi - lo);
    }
    return total;
  }

  /// Breakpoint times strictly inside (t1, t2); quadrature grids refine here.
  std::vector<double> interior_breakpoints(double t1, double t2) const {
    std::vector<double> out;
    for (const Point& p : points_)
      if (p.t > t1 && p.t < t2) out.push_back(p.t);
    return out;
  }

  const std::vector<Point>& points() const { return points_; }

 private:
  void check_range(double t1, double t2) const {
    if (!(t1 >= 0.0) || !(t2 <= horizon()) || !(t1 <= t2))
      throw std::out_of_range("time interval outside demand curve domain");
  }

  std::size_t segment_index(double t) const {
    // Last segment owns t == horizon.
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const Point& p) { return v < p.t; });
    std::size_t i = static_cast<std::size_t>(it - points_.begin());
    if (i == 0) return 0;
    if (i >= points_.size()) return points_.size() - 2;
    return i - 1;
  }

  double interpolate(std::size_t seg, double t) const {
    const Point& p0 = points_[seg];
    const Point& p1 = points_[seg + 1];
    const double w = (t - p0.t) / (p1.t - p0.t);
    return p0.rate + w * (p1.rate - p0.rate);
  }

  std::vector<Point> points_;
};

inline double integrate_K(const DemandCurve& demand, double t1, double t2) {
  return demand.integrate(t1, t2);
}

}  // namespace priceopt
