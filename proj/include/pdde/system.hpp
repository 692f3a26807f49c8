#pragma once

#include <optional>
#include <vector>

#include "pdde/impulse.hpp"
#include "pdde/nonlinearity.hpp"
#include "pdde/periodic_fn.hpp"

namespace pdde {

/// Full description of a periodic impulsive delay system:
///
///   x_i'(t) = -death_i(t) x_i(t) + sum_{j != i} coupling_ij(t) x_j(t)
///             + g_i(t, x_it)                       for t != t_k,
///   x_i(t_k+) - x_i(t_k) = I_ik(x_i(t_k)),
///
/// with every coefficient omega-periodic and nonnegative, and the impulse
/// schedule repeating with period omega.
struct SystemSpec {
  int n = 1;
  double omega = 1.0;
  std::vector<PeriodicFn> death;                    // d_i
  std::vector<std::vector<PeriodicFn>> coupling;    // coupling[i][j], diagonal == 0
  std::vector<NonlinearityDescriptor> birth;        // g_i
  ImpulseSchedule impulses;
  std::optional<EnvelopePair> envelopes;            // declared comparison data
  std::optional<LimitProfile> limits;               // declared limit profiles

  double max_delay() const;

  /// Structural hypothesis checks (H1), (H2), (H4); throws ModelError with
  /// the violated tag. The schedule admissibility bound (H3) is checked when
  /// impulse bounds are computed, where the offending product is known.
  void validate() const;
};

} // namespace pdde
