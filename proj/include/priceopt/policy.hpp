#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "priceopt/errors.hpp"
#include "priceopt/value_weight.hpp"

namespace priceopt {

enum class SegmentForm { constant_price, tvm_multiplier };

/// One policy piece on [t_start, t_end): either a constant internal price p,
/// or a Lagrange multiplier q whose price is p(t) = (a/b - q/zeta(t)) / 2.
struct PolicySegment {
  double t_start;
  double t_end;
  SegmentForm form;
  double value;  // p for constant_price, q for tvm_multiplier
};

/// A pricing policy over [0, T), self-contained for evaluation.
///
/// Multiplier segments are materialized against the weights the policy was
/// solved with (its "pricing context"), not against whatever scenario it is
/// later simulated under -- a value-blind baseline keeps posting the prices
/// its own model produced. Posted price is kappa_context(t) * internal price.
class PricingPolicy {
 public:
  PricingPolicy(std::vector<PolicySegment> segments, ValueWeight phi_context,
                ValueWeight kappa_context, double linear_a = std::numeric_limits<double>::quiet_NaN(),
                double linear_b = std::numeric_limits<double>::quiet_NaN())
      : segments_(std::move(segments)),
        phi_ctx_(std::move(phi_context)),
        kappa_ctx_(std::move(kappa_context)),
        a_(linear_a),
        b_(linear_b) {
    if (segments_.empty()) throw validation_error("policy needs at least one segment");
    const double scale = std::max(1.0, std::abs(segments_.back().t_end));
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].t_start < segments_[i].t_end))
        throw validation_error("policy segment must have positive length");
      if (i > 0) {
        if (std::abs(segments_[i].t_start - segments_[i - 1].t_end) > 1e-9 * scale)
          throw validation_error("policy segments must be contiguous");
        segments_[i].t_start = segments_[i - 1].t_end;  // snap away rounding gaps
      }
      if (segments_[i].form == SegmentForm::tvm_multiplier && !(std::isfinite(a_) && b_ > 0.0))
        throw validation_error("multiplier segments need the linear propensity context (a, b)");
    }
  }

  /// Single constant-price policy over [0, horizon).
  static PricingPolicy constant(double price, double horizon) {
    return PricingPolicy({{0.0, horizon, SegmentForm::constant_price, price}},
                         ValueWeight::constant(1.0), ValueWeight::constant(1.0));
  }

  double start() const { return segments_.front().t_start; }
  double end() const { return segments_.back().t_end; }
  const std::vector<PolicySegment>& segments() const { return segments_; }

  double internal_price(double t) const { return internal_price_in(segment_at(t), t); }

  double posted_price(double t) const {
    return kappa_ctx_(t) * internal_price(t);
  }

  /// Price evaluated with a specific segment's form; lets integrators pick the
  /// segment by interval midpoint and evaluate one-sided at its boundaries.
  double internal_price_in(const PolicySegment& seg, double t) const {
    if (seg.form == SegmentForm::constant_price) return seg.value;
    const double zeta = phi_ctx_(t) * kappa_ctx_(t);
    return 0.5 * (a_ / b_ - seg.value / zeta);
  }

  double posted_price_in(const PolicySegment& seg, double t) const {
    return kappa_ctx_(t) * internal_price_in(seg, t);
  }

  const ValueWeight& phi_context() const { return phi_ctx_; }
  const ValueWeight& kappa_context() const { return kappa_ctx_; }
  double context_a() const { return a_; }
  double context_b() const { return b_; }

  bool has_multiplier_segments() const {
    return std::any_of(segments_.begin(), segments_.end(), [](const PolicySegment& s) {
      return s.form == SegmentForm::tvm_multiplier;
    });
  }

 private:
  const PolicySegment& segment_at(double t) const {
    if (t < start() || t > end()) throw std::out_of_range("time outside policy domain");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const PolicySegment& s) { return v < s.t_start; });
    return it == segments_.begin() ? segments_.front() : *(it - 1);
  }

  std::vector<PolicySegment> segments_;
  ValueWeight phi_ctx_;
  ValueWeight kappa_ctx_;
  double a_, b_;
};

/// One candidate price/multiplier considered for a future constraint.
struct SolveCandidate {
  std::size_t constraint_index;
  ConstraintKind kind;
  double price;  // price at the segment start; NaN when unused
  double q;      // multiplier; NaN for the basic solver
};

/// Diagnostic record of one solver iteration.
struct SolveStep {
  double t_start;
  double t_end;
  std::size_t from_index;
  std::size_t binding_index;
  ConstraintKind binding_kind;
  double start_sales;
  double start_revenue;
  std::vector<SolveCandidate> candidates;
};

struct SolveTrace {
  std::vector<SolveStep> steps;
};

struct SolveResult {
  PricingPolicy policy;
  SolveTrace trace;
};

}  // namespace priceopt
