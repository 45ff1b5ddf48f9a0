#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "priceopt/errors.hpp"

namespace priceopt {

/// Positive time weight: the TVM discount phi(t), the development-stage uplift
/// kappa(t), or their product zeta. Constant(1) is the identity weight.
class ValueWeight {
 public:
  enum class Form { constant, exponential_decay, linear, sampled };

  struct Sample {
    double t;
    double value;
  };

  static ValueWeight constant(double c) {
    if (!(c > 0.0)) throw validation_error("constant weight must be positive");
    return ValueWeight(Form::constant, c);
  }

  /// exp(-rate * t); negative rate gives growth.
  static ValueWeight exponential_decay(double rate) {
    if (!std::isfinite(rate)) throw validation_error("exponential weight rate must be finite");
    return ValueWeight(Form::exponential_decay, rate);
  }

  /// 1 + slope * t; positivity over the horizon is checked by the scenario.
  static ValueWeight linear(double slope) {
    if (!std::isfinite(slope)) throw validation_error("linear weight slope must be finite");
    return ValueWeight(Form::linear, slope);
  }

  static ValueWeight sampled(std::vector<Sample> samples) {
    if (samples.size() < 2) throw validation_error("sampled weight needs at least two points");
    if (samples.front().t != 0.0) throw validation_error("sampled weight must start at t=0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!(samples[i].value > 0.0)) throw validation_error("sampled weight values must be positive");
      if (i > 0 && !(samples[i].t > samples[i - 1].t))
        throw validation_error("sampled weight times must be strictly increasing");
    }
    ValueWeight w(Form::sampled, 0.0);
    w.samples_ = std::move(samples);
    return w;
  }

  double operator()(double t) const {
    switch (form_) {
      case Form::constant:
        return param_;
      case Form::exponential_decay:
        return std::exp(-param_ * t);
      case Form::linear:
        return 1.0 + param_ * t;
      case Form::sampled:
        return interpolate(t);
    }
    return 1.0;  // unreachable
  }

  bool is_unit() const { return form_ == Form::constant && param_ == 1.0; }

  /// Throws unless the weight stays positive (and, for sampled forms, defined)
  /// on all of [0, t_end].
  void validate_on(double t_end) const {
    if (form_ == Form::linear && 1.0 + param_ * t_end <= 0.0)
      throw validation_error("linear weight becomes non-positive before the horizon");
    if (form_ == Form::sampled && samples_.back().t < t_end)
      throw validation_error("sampled weight does not cover the horizon");
  }

  /// Kink times strictly inside (t1, t2) (sampled form only).
  void append_interior_breakpoints(double t1, double t2, std::vector<double>& out) const {
    if (form_ != Form::sampled) return;
    for (const Sample& s : samples_)
      if (s.t > t1 && s.t < t2) out.push_back(s.t);
  }

  Form form() const { return form_; }
  double param() const { return param_; }
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  ValueWeight(Form form, double param) : form_(form), param_(param) {}

  double interpolate(double t) const {
    if (t <= samples_.front().t) return samples_.front().value;
    if (t >= samples_.back().t) return samples_.back().value;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const Sample& s) { return v < s.t; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.value + w * (hi.value - lo.value);
  }

  Form form_;
  double param_;
  std::vector<Sample> samples_;
};

}  // namespace priceopt
