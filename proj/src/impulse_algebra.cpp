#include "pdde/impulse_algebra.hpp"

#include <cmath>
#include <sstream>

namespace pdde {

double decay_integral(const SystemSpec& spec, int i, double t) {
  return spec.death[std::size_t(i)].antiderivative(t);
}

double window_product(const SystemSpec& spec, int i, const GridFunction& x,
                      double t_from, double t_to) {
  const double omega = spec.omega;
  if (t_to < t_from || t_to > t_from + omega * (1.0 + 1e-12))
    throw ModelError("model", "window_product window must lie within one period");
  double prod = 1.0;
  for (std::size_t k = 0; k < spec.impulses.count(); ++k) {
    const double tk = spec.impulses.instants[k];
    // unique shift with tk + m*omega in [t_from, t_from + omega)
    const double m = std::ceil((t_from - tk) / omega - 1e-13);
    const double s = tk + m * omega;
    if (s >= t_from - 1e-13 * omega && s < t_to - 1e-13 * omega) {
      const double u = x.eval(i, tk); // x periodic: value at the base instant
      prod *= spec.impulses.maps[k][std::size_t(i)].jump_ratio(u);
    }
  }
  return prod;
}

double periodic_gain(const SystemSpec& spec, int i, const GridFunction& x) {
  double full = 1.0;
  for (std::size_t k = 0; k < spec.impulses.count(); ++k)
    full *= spec.impulses.maps[k][std::size_t(i)].jump_ratio(
        x.eval(i, spec.impulses.instants[k]));
  const double denom = full * std::exp(decay_integral(spec, i, spec.omega)) - 1.0;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "component " << i + 1 << ": full-period ratio product " << full
       << " defeats decay e^{D(omega)} = "
       << std::exp(decay_integral(spec, i, spec.omega));
    throw ModelError("H3", os.str());
  }
  return 1.0 / denom;
}

std::vector<ComponentBounds> impulse_bounds(const SystemSpec& spec) {
  std::vector<ComponentBounds> out(std::size_t(spec.n));
  const std::size_t p = spec.impulses.count();
  for (int i = 0; i < spec.n; ++i) {
    ComponentBounds& b = out[std::size_t(i)];
    b.decay_period = decay_integral(spec, i, spec.omega);
    const double eD = std::exp(b.decay_period);

    double upper_full = 1.0, lower_full = 1.0; // products of (1+slope)
    for (std::size_t k = 0; k < p; ++k) {
      upper_full *= 1.0 + spec.impulses.maps[k][std::size_t(i)].upper_slope();
      lower_full *= 1.0 + spec.impulses.maps[k][std::size_t(i)].lower_slope();
    }
    if (!(upper_full < eD)) {
      std::ostringstream os;
      os << "component " << i + 1 << ": slope product " << upper_full
         << " must stay below e^{D(omega)} = " << eD;
      throw ModelError("H3", os.str());
    }

    // window products over cyclically wrapped index ranges j..j+l-1
    b.window_min = 1.0;
    b.window_max = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      double prod_eta = 1.0, prod_alpha = 1.0;
      for (std::size_t l = 1; l <= p; ++l) {
        const std::size_t k = (j + l - 1) % p;
        prod_eta /= 1.0 + spec.impulses.maps[k][std::size_t(i)].upper_slope();
        prod_alpha /= 1.0 + spec.impulses.maps[k][std::size_t(i)].lower_slope();
        b.window_min = std::min(b.window_min, prod_eta);
        b.window_max = std::max(b.window_max, prod_alpha);
      }
    }

    b.gain_min = 1.0 / (eD / lower_full - 1.0);
    b.gain_max = 1.0 / (eD / upper_full - 1.0);
    b.cone_sigma = b.window_min / b.window_max * std::exp(-b.decay_period);
    b.pw_mult_min = b.gain_min * b.window_min * (eD - 1.0);
    b.pw_mult_max = b.gain_max * b.window_max * (eD - 1.0);
    b.avg_mult_min = b.gain_min * b.window_min;
    b.avg_mult_max = b.gain_max * b.window_max * eD;
  }
  return out;
}

} // namespace pdde
