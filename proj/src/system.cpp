#include "pdde/system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdde {

double SystemSpec::max_delay() const {
  double tau = 0.0;
  for (const auto& g : birth) tau = std::max(tau, g.max_delay());
  return tau;
}

void SystemSpec::validate() const {
  if (n < 1) throw ModelError("model", "dimension must be >= 1");
  if (!(omega > 0.0)) throw ModelError("model", "period must be positive");
  const auto sz = std::size_t(n);
  if (death.size() != sz || coupling.size() != sz || birth.size() != sz)
    throw ModelError("model", "component arrays do not match dimension");

  impulses.validate(n, omega);

  for (int i = 0; i < n; ++i) {
    if (death[i].period() != omega)
      throw ModelError("H4", "mortality of component " + std::to_string(i + 1) +
                                 " has mismatched period");
    if (!(death[i].period_integral() > 0.0))
      throw ModelError("H4", "mortality of component " + std::to_string(i + 1) +
                                 " must have positive period integral");
    if (coupling[i].size() != sz)
      throw ModelError("model", "coupling row " + std::to_string(i + 1) +
                                    " does not cover all components");
    if (!coupling[i][i].is_constant() || coupling[i][i].mean() != 0.0)
      throw ModelError("H4", "self-coupling of component " + std::to_string(i + 1) +
                                 " must be identically zero");
    for (int j = 0; j < n; ++j)
      if (coupling[i][j].period() != omega)
        throw ModelError("H4", "coupling (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") has mismatched period");
    for (const auto& term : birth[i].terms) {
      for (const PeriodicFn* f : {&term.beta, &term.c, &term.tau, &term.theta,
                                  &term.gamma})
        if (f->period() != omega && !(f->is_constant() && f->mean() == 0.0))
          throw ModelError("H4", "birth coefficient period mismatch in component " +
                                     std::to_string(i + 1));
      if (term.tau.min_on_period() < 0.0)
        throw ModelError("H4", "negative delay in component " + std::to_string(i + 1));
    }
  }

  // (H4)(ii): no component may starve when n > 1
  if (n > 1) {
    for (int i = 0; i < n; ++i) {
      bool coupled = true;
      for (int j = 0; j < n; ++j)
        if (j != i && !(coupling[i][j].period_integral() > 0.0)) coupled = false;
      const bool fed = birth[i].zero_state_integral(omega) > 0.0;
      if (!coupled && !fed)
        throw ModelError("H4", "component " + std::to_string(i + 1) +
                                   " has neither full incoming coupling nor "
                                   "positive birth at zero state");
    }
  }

  if (envelopes) envelopes->validate(n, omega);
  if (limits) limits->validate(n);
}

} // namespace pdde
