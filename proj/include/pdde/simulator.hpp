#pragma once

#include <string>
#include <vector>

#include "pdde/grid_function.hpp"
#include "pdde/system.hpp"

namespace pdde {

struct ImpulseEvent {
  double t = 0.0;
  std::vector<double> before, after; // component states across the jump
};

/// Dense trajectory of one integration run: cubic interpolation per step,
/// impulse jumps applied algebraically between steps. State reads are
/// left-continuous at the jump instants.
class Trajectory {
public:
  struct Step {
    double t0 = 0.0, h = 0.0;
    std::vector<double> y0, f0, y1, f1;
  };

  std::vector<Step> steps;
  std::vector<ImpulseEvent> events;
  GridFunction history; // omega-periodic, read for times before t_start
  double t_start = 0.0;

  double t_end() const { return steps.empty() ? t_start : steps.back().t0 + steps.back().h; }
  double value(int i, double s) const;
  /// Right limit at step boundaries (post-impulse), identical elsewhere.
  double value_right(int i, double s) const;
  std::vector<double> state(double s) const;

  double worst_negative = 0.0;  // most negative state encountered
  bool finite = true;
  std::string note;
};

struct SimOptions {
  double step = 0.0;      // target step; 0 picks omega/1024 capped by the delays
  double probe_spacing = 0.0; // unused placeholder for future samplers
};

/// Fixed-step 4th-order Runge-Kutta over panels aligned to every impulse
/// instant and to the constant-delay images of the junction points (depth 2).
/// Distributed birth terms integrate over the dense output per stage.
Trajectory integrate(const SystemSpec& spec, const GridFunction& history,
                     double t_end, SimOptions opts = {});

/// sup over t in [t_probe, t_probe + omega] of |x(t + omega) - x(t)|.
double periodicity_residual(const Trajectory& traj, double omega, double t_probe,
                            int probes = 512);

/// Per-component minimum over [t_end - window, t_end].
std::vector<double> long_run_floor(const Trajectory& traj, double window);

} // namespace pdde
