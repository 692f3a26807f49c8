#pragma once

#include <vector>

#include "pdde/grid_function.hpp"
#include "pdde/system.hpp"

namespace pdde {

/// Closed-form per-component bounds implied by the impulse slope constants
/// and the mortality integral. All downstream existence criteria consume
/// these instead of state-dependent quantities.
struct ComponentBounds {
  double window_min = 1.0;   // least product of jump ratios over any window
  double window_max = 1.0;   // greatest such product
  double gain_min = 0.0;     // least periodization gain
  double gain_max = 0.0;     // greatest periodization gain
  double decay_period = 0.0; // \int_0^omega d_i
  double cone_sigma = 0.0;   // window_min / window_max * exp(-decay_period)
  double pw_mult_min = 1.0;  // gain_min * window_min * (e^{decay_period} - 1)
  double pw_mult_max = 1.0;  // gain_max * window_max * (e^{decay_period} - 1)
  double avg_mult_min = 0.0; // gain_min * window_min
  double avg_mult_max = 0.0; // gain_max * window_max * e^{decay_period}
};

/// Exact \int_0^t d_i(s) ds from the Fourier antiderivative.
double decay_integral(const SystemSpec& spec, int i, double t);

/// Product of jump ratios of component i over impulse instants in
/// [t_from, t_to), schedule extended periodically; empty product is 1.
/// Requires t_from <= t_to <= t_from + omega.
double window_product(const SystemSpec& spec, int i, const GridFunction& x,
                      double t_from, double t_to);

/// Periodization gain (full-period ratio product * e^{decay over period}
/// minus one, inverted). Throws ModelError("H3") when the denominator is
/// not positive.
double periodic_gain(const SystemSpec& spec, int i, const GridFunction& x);

/// All component bounds; throws ModelError("H3") naming the offending
/// slope product when the schedule is inadmissible.
std::vector<ComponentBounds> impulse_bounds(const SystemSpec& spec);

} // namespace pdde
