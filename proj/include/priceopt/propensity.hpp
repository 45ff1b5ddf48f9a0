#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "priceopt/errors.hpp"

namespace priceopt {

/// Purchase propensity v(p): the fraction of arriving customers willing to buy
/// at (internal) price p.
///
/// Two forms are supported:
///   - linear: v(p) = clamp(a - b*p, 0, 1) with 0 < a < 2, b > 0;
///     p* = a/(2b), p_bar = a/b, closed-form inverses.
///   - tabulated: linear interpolation of (price, fraction) samples; past the
///     last sample the final segment is continued down to zero. Inverses use
///     bisection on the decreasing branch.
///
/// The model assumes v is strictly decreasing and p*v(p) strictly decreasing
/// on (p*, p_bar); tabulated inputs are checked for this on their grid at load
/// time and rejected otherwise. (The underlying regularity condition on
/// v/v' + p is monotone non-decreasing above p*, which the linear form
/// satisfies: v/v' + p = 2p - a/b.)
class Propensity {
 public:
  struct Sample {
    double price;
    double fraction;
  };

  static Propensity linear(double a, double b) {
    if (!(a > 0.0 && a < 2.0)) throw validation_error("linear propensity requires 0 < a < 2");
    if (!(b > 0.0)) throw validation_error("linear propensity requires b > 0");
    Propensity v;
    v.linear_ = true;
    v.a_ = a;
    v.b_ = b;
    v.p_star_ = a / (2.0 * b);
    v.p_bar_ = a / b;
    return v;
  }

  static Propensity tabulated(std::vector<Sample> samples) {
    if (samples.size() < 2) throw validation_error("tabulated propensity needs at least two points");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!(samples[i].price >= 0.0)) throw validation_error("tabulated prices must be non-negative");
      if (samples[i].fraction < 0.0 || samples[i].fraction > 1.0)
        throw validation_error("tabulated fractions must lie in [0, 1]");
      if (i > 0 && !(samples[i].price > samples[i - 1].price))
        throw validation_error("tabulated prices must be strictly increasing");
    }
    Propensity v;
    v.linear_ = false;
    v.samples_ = std::move(samples);
    v.init_tabulated();
    return v;
  }

  double operator()(double price) const {
    if (price < 0.0) throw std::domain_error("price must be non-negative");
    if (linear_) return std::clamp(a_ - b_ * price, 0.0, 1.0);
    return eval_tabulated(price);
  }

  /// Revenue-maximizing price, argmax of p*v(p).
  double p_star() const { return p_star_; }

  /// Lowest price with zero propensity; +infinity if v never reaches zero.
  double p_bar() const { return p_bar_; }

  double max_sales_fraction() const { return (*this)(p_star_); }
  double max_revenue_rate() const { return p_star_ * (*this)(p_star_); }

  bool is_linear() const { return linear_; }
  double linear_a() const { return a_; }
  double linear_b() const { return b_; }
  const std::vector<Sample>& samples() const { return samples_; }

  /// Unique p in [p*, p_bar) with v(p) = target.
  double invert_sales_rate(double target) const {
    if (!(target > 0.0)) throw std::domain_error("sales-rate target must be positive");
    const double vmax = max_sales_fraction();
    if (target > vmax * (1.0 + kFeasSlack))
      throw infeasible_error("sales-rate target exceeds v(p*)");
    if (target >= vmax) return p_star_;
    if (linear_) return (a_ - target) / b_;
    return bisect_decreasing([this](double p) { return eval_tabulated(p); }, target);
  }

  /// Unique p in [p*, p_bar) with p*v(p) = target (the root above p*).
  double invert_revenue_rate(double target) const {
    if (!(target > 0.0)) throw std::domain_error("revenue-rate target must be positive");
    const double rmax = max_revenue_rate();
    if (target > rmax * (1.0 + kFeasSlack))
      throw infeasible_error("revenue-rate target exceeds p*v(p*)");
    if (target >= rmax) return p_star_;
    if (linear_) {
      const double disc = std::max(a_ * a_ - 4.0 * b_ * target, 0.0);
      return (a_ + std::sqrt(disc)) / (2.0 * b_);
    }
    return bisect_decreasing([this](double p) { return p * eval_tabulated(p); }, target);
  }

 private:
  static constexpr double kFeasSlack = 1e-12;

  Propensity() = default;

  double eval_tabulated(double price) const {
    if (price <= samples_.front().price) return samples_.front().fraction;
    const Sample& last = samples_.back();
    if (price >= last.price)
      return std::clamp(last.fraction + tail_slope_ * (price - last.price), 0.0, 1.0);
    auto it = std::upper_bound(samples_.begin(), samples_.end(), price,
                               [](double v, const Sample& s) { return v < s.price; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double w = (price - lo.price) / (hi.price - lo.price);
    return lo.fraction + w * (hi.fraction - lo.fraction);
  }

  void init_tabulated() {
    const std::size_t n = samples_.size();
    const Sample& last = samples_[n - 1];
    tail_slope_ = (last.fraction - samples_[n - 2].fraction) /
                  (last.price - samples_[n - 2].price);
    if (last.fraction > 0.0 && !(tail_slope_ < 0.0))
      throw validation_error(
          "tabulated propensity must end on a decreasing segment or reach zero");

    if (last.fraction > 0.0) {
      p_bar_ = last.price - last.fraction / tail_slope_;
    } else {
      // First grid price at which the interpolant reaches zero.
      std::size_t i = n - 1;
      while (i > 0 && samples_[i - 1].fraction == 0.0) --i;
      p_bar_ = samples_[i].price;
    }

    p_star_ = revenue_argmax();

    // Conditions 2-3: v and p*v strictly decreasing past the revenue peak.
    double prev_v = eval_tabulated(p_star_);
    double prev_r = p_star_ * prev_v;
    for (const Sample& s : samples_) {
      if (s.price <= p_star_ || s.price >= p_bar_) continue;
      const double r = s.price * s.fraction;
      if (!(s.fraction < prev_v) || !(r < prev_r))
        throw validation_error(
            "tabulated propensity must be strictly decreasing in v and p*v past the peak");
      prev_v = s.fraction;
      prev_r = r;
    }
  }

  // argmax of p*v(p) over the interpolant, including the extrapolated tail;
  // per segment the revenue is quadratic, so candidates are segment ends and
  // interior vertices.
  double revenue_argmax() const {
    double best_p = samples_.front().price;
    double best_r = best_p * samples_.front().fraction;
    auto consider = [&](double p) {
      const double r = p * eval_tabulated(p);
      if (r > best_r) {
        best_r = r;
        best_p = p;
      }
    };
    for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
      const Sample& s0 = samples_[i];
      const Sample& s1 = samples_[i + 1];
      consider(s1.price);
      const double slope = (s1.fraction - s0.fraction) / (s1.price - s0.price);
      if (slope < 0.0) {
        // r(p) = p*(f0 + slope*(p - p0)); vertex at p = (slope*p0 - f0)/(2*slope)
        const double vertex = (slope * s0.price - s0.fraction) / (2.0 * slope);
        if (vertex > s0.price && vertex < s1.price) consider(vertex);
      }
    }
    if (samples_.back().fraction > 0.0) {
      const Sample& last = samples_.back();
      const double vertex = (tail_slope_ * last.price - last.fraction) / (2.0 * tail_slope_);
      if (vertex > last.price && vertex < p_bar_) consider(vertex);
    }
    return best_p;
  }

  // Bisection for f(p) = target with f strictly decreasing on [p*, p_bar).
  template <class F>
  double bisect_decreasing(F&& f, double target) const {
    double lo = p_star_;
    double hi;
    if (std::isfinite(p_bar_)) {
      hi = p_bar_;
    } else {
      hi = std::max(2.0 * p_star_, p_star_ + 1.0);
      int guard = 0;
      while (f(hi) > target) {
        hi *= 2.0;
        if (++guard > 200) throw infeasible_error("failed to bracket target propensity");
      }
    }
    const double tol = 1e-12 * (std::isfinite(p_bar_) ? p_bar_ : std::max(1.0, hi));
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  bool linear_ = true;
  double a_ = 1.0;
  double b_ = 1.0;
  double p_star_ = 0.5;
  double p_bar_ = 1.0;
  double tail_slope_ = 0.0;
  std::vector<Sample> samples_;
};

}  // namespace priceopt
