#include "pdde/periodic_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pdde {

PeriodicFn::PeriodicFn(double period, double mean, std::vector<double> cos_coeffs,
                       std::vector<double> sin_coeffs, bool nonneg, std::string name)
    : period_(period), mean_(mean), cos_(std::move(cos_coeffs)),
      sin_(std::move(sin_coeffs)), nonneg_(nonneg), name_(std::move(name)) {
  if (!(period_ > 0.0))
    throw ModelError("model", "PeriodicFn '" + name_ + "': period must be positive");
}

PeriodicFn PeriodicFn::constant(double period, double value, bool nonneg,
                                std::string name) {
  return PeriodicFn(period, value, {}, {}, nonneg, std::move(name));
}

double PeriodicFn::raw_eval(double t) const {
  double v = mean_;
  const double w = 2.0 * std::numbers::pi / period_;
  for (std::size_t k = 0; k < cos_.size(); ++k)
    v += cos_[k] * std::cos(w * double(k + 1) * t);
  for (std::size_t k = 0; k < sin_.size(); ++k)
    v += sin_[k] * std::sin(w * double(k + 1) * t);
  return v;
}

double PeriodicFn::eval(double t) const {
  double v = raw_eval(t);
  if (nonneg_) {
    double scale = std::abs(mean_);
    for (double c : cos_) scale += std::abs(c);
    for (double s : sin_) scale += std::abs(s);
    const double band = 1e-12 * (1.0 + scale);
    if (v < -band) {
      std::ostringstream os;
      os << "coefficient '" << name_ << "' flagged nonneg evaluates to " << v
         << " at t=" << t;
      throw ModelError("nonneg", os.str());
    }
    if (v < 0.0) v = 0.0;
  }
  return v;
}

double PeriodicFn::antiderivative(double t) const {
  const double w = 2.0 * std::numbers::pi / period_;
  double v = mean_ * t;
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kk = double(k + 1);
    v += cos_[k] * std::sin(w * kk * t) / (w * kk);
  }
  for (std::size_t k = 0; k < sin_.size(); ++k) {
    const double kk = double(k + 1);
    v += sin_[k] * (1.0 - std::cos(w * kk * t)) / (w * kk);
  }
  return v;
}

namespace {

// Grid scan followed by a parabolic step around the best node.
double scan_extremum(const PeriodicFn& f, bool maximize) {
  const int n = 2048;
  const double h = f.period() / n;
  double best = maximize ? -1e300 : 1e300;
  int best_i = 0;
  auto raw = [&](double t) {
    // bypasses the nonneg clamp: extrema are structural queries
    double v = f.mean();
    const double w = 2.0 * std::numbers::pi / f.period();
    for (std::size_t k = 0; k < f.cos_coeffs().size(); ++k)
      v += f.cos_coeffs()[k] * std::cos(w * double(k + 1) * t);
    for (std::size_t k = 0; k < f.sin_coeffs().size(); ++k)
      v += f.sin_coeffs()[k] * std::sin(w * double(k + 1) * t);
    return v;
  };
  for (int i = 0; i < n; ++i) {
    const double v = raw(i * h);
    if (maximize ? (v > best) : (v < best)) {
      best = v;
      best_i = i;
    }
  }
  // local refinement on [t-h, t+h]
  double lo = (best_i - 1) * h, hi = (best_i + 1) * h;
  for (int i = 0; i <= 64; ++i) {
    const double t = lo + (hi - lo) * i / 64.0;
    const double v = raw(t);
    if (maximize ? (v > best) : (v < best)) best = v;
  }
  return best;
}

} // namespace

double PeriodicFn::max_on_period() const {
  if (is_constant()) return mean_;
  return scan_extremum(*this, true);
}

double PeriodicFn::min_on_period() const {
  if (is_constant()) return mean_;
  return scan_extremum(*this, false);
}

} // namespace pdde
