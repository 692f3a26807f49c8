#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdde/grid_function.hpp"
#include "pdde/impulse_algebra.hpp"
#include "pdde/system.hpp"

namespace pdde {

/// Cone parameters: component floors relative to the amplitude,
/// x_i(t) >= sigma_i * sup x_i. Defaults come from the impulse bounds
/// (window_min / window_max * e^{-decay over period}); callers may lower.
struct ConeParams {
  std::vector<double> sigma;
  static ConeParams from_bounds(const std::vector<ComponentBounds>& b);
};

struct FixedPointResult {
  GridFunction solution;
  double residual = 0.0; // sup norm of the operator defect at the solution
  int iterations = 0;
  bool converged = false; // residual tolerance met
  bool cone_ok = false;
  double positivity_floor = 0.0;
  double final_damping = 0.0;
  std::string note;

  bool converged_positive() const {
    return converged && cone_ok && positivity_floor > 0.0;
  }
};

/// One application of the periodic integral operator: for each component,
/// quadrature of the jump-weighted exponential kernel against the coupling
/// plus birth terms, evaluated on the grid of `x`. The returned function
/// satisfies the periodic closure and the post-impulse jump relation
/// structurally (the wraparound is factored through one cumulative integral).
GridFunction apply_phi(const SystemSpec& spec, const GridFunction& x);

/// Max relative mismatch of the post-impulse values of y = apply_phi(x)
/// against jump_ratio(x(t_k))^{-1} * y(t_k), over components and instants.
double jump_identity_violation(const SystemSpec& spec, const GridFunction& x,
                               const GridFunction& y);

/// Cone membership check with the worst slack (negative when outside).
std::pair<bool, double> cone_membership(const GridFunction& x,
                                        const ConeParams& cone);

struct SolveOptions {
  int panels = 512;
  double damping = 0.5;  // halved on residual growth, floored at 1/64
  double tol = 1e-8;     // relative sup-norm tolerance
  int max_iter = 2000;
  bool accelerate = true; // secant-history acceleration stage on stagnation
};

/// Damped operator iteration x <- (1-lambda) x + lambda Phi x, with an
/// optional acceleration stage when plain damping stagnates. Never fails
/// silently: non-convergence and divergence are reported in the result.
FixedPointResult solve_fixed_point(const SystemSpec& spec, SolveOptions opts = {},
                                   std::optional<GridFunction> initial = {});

} // namespace pdde
