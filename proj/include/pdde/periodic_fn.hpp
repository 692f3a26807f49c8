#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdde {

/// Error raised when a model invariant or structural hypothesis is violated.
/// `tag` names the violated hypothesis (H1..H4) or invariant ("nonneg", ...).
class ModelError : public std::runtime_error {
public:
  ModelError(std::string tag, const std::string& what)
      : std::runtime_error("[" + tag + "] " + what), tag_(std::move(tag)) {}
  const std::string& tag() const noexcept { return tag_; }

private:
  std::string tag_;
};

/// Truncated Fourier series with fixed period:
///
///   f(t) = mean + sum_k cos_coeffs[k-1] cos(2 pi k t / period)
///               + sum_k sin_coeffs[k-1] sin(2 pi k t / period)
///
/// All periodic coefficients of a system (mortality, coupling, birth rates,
/// delays) are instances of this class, so period integrals are exact
/// (period * mean) and the antiderivative is available in closed form.
/// A function flagged `nonneg` rejects evaluations below a small roundoff
/// band and clamps the band to zero.
class PeriodicFn {
public:
  PeriodicFn() = default;
  PeriodicFn(double period, double mean, std::vector<double> cos_coeffs,
             std::vector<double> sin_coeffs, bool nonneg = false,
             std::string name = {});

  static PeriodicFn constant(double period, double value, bool nonneg = false,
                             std::string name = {});

  double eval(double t) const;

  /// Exact antiderivative \int_0^t f(s) ds, valid for any real t.
  double antiderivative(double t) const;

  /// Exact \int_0^period f(s) ds = period * mean.
  double period_integral() const { return period_ * mean_; }

  double period() const { return period_; }
  double mean() const { return mean_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  bool nonneg_flag() const { return nonneg_; }
  const std::string& name() const { return name_; }
  bool is_constant() const { return cos_.empty() && sin_.empty(); }

  /// Coarse global max/min over one period (grid scan plus local parabolic
  /// refinement); adequate for delays and hypothesis checks.
  double max_on_period() const;
  double min_on_period() const;

  bool operator==(const PeriodicFn&) const = default;

private:
  double raw_eval(double t) const;

  double period_ = 1.0;
  double mean_ = 0.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
  bool nonneg_ = false;
  std::string name_;
};

} // namespace pdde
