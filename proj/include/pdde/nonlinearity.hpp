#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdde/periodic_fn.hpp"

namespace pdde {

enum class NonlinKind {
  nicholson_discrete,        // sum_l beta(t) x(t-tau(t)) exp(-c(t) x(t-tau(t)))
  nicholson_distributed,     // sum_l beta(t) int_{t-tau(t)}^t gamma(s) x(s) exp(-c(s) x(s)) ds
  nicholson_mixed,           // sum_l beta(t) x(t-tau(t)) exp(-c(t) x(t-theta(t)))
  hematopoiesis_distributed, // sum_l beta(t) / (1 + c(t) (int_{t-tau(t)}^t x)^alpha)
  hematopoiesis_discrete,    // sum_l beta(t) / (1 + c(t) x(t-tau(t))^alpha)
  mackey_glass_distributed,  // sum_l beta(t) y / (1 + c(t) y^alpha), y = int_{t-tau(t)}^t x
  custom_table,              // sum_l beta(t) table(x(t-tau(t)))
};

std::string to_string(NonlinKind k);
NonlinKind nonlin_kind_from_string(const std::string& s);

/// Monotone piecewise-linear table u -> f(u), extended linearly past the
/// last knot. Used by the custom birth kind.
struct PLTable {
  std::vector<double> u, f;
  double operator()(double x) const;
  double slope_at_zero() const;
  double slope_at_infinity() const;
  bool operator==(const PLTable&) const = default;
};

struct NonlinTerm {
  PeriodicFn beta;   // outer rate, all kinds
  PeriodicFn c;      // inner coefficient (unused by custom_table)
  PeriodicFn tau;    // delay
  PeriodicFn theta;  // second delay, nicholson_mixed only
  PeriodicFn gamma;  // inner weight, nicholson_distributed only
  double alpha = 1.0; // exponent, hematopoiesis / mackey_glass
  PLTable table;      // custom_table only

  bool operator==(const NonlinTerm&) const = default;
};

struct NonlinearityDescriptor {
  NonlinKind kind = NonlinKind::nicholson_discrete;
  std::vector<NonlinTerm> terms;

  bool has_distributed_terms() const;
  /// Largest delay reached by any term (max over time of tau, and theta for
  /// the mixed kind).
  double max_delay() const;
  /// Exact integral over one period of g(t, 0): positive only for kinds whose
  /// birth does not vanish at zero state.
  double zero_state_integral(double omega) const;

  bool operator==(const NonlinearityDescriptor&) const = default;
};

/// Comparison envelopes: floors b1 near zero amplitude, ceilings b2 at large
/// amplitude (or the mirrored roles for the superlinear checkers), valid on
/// the amplitude annulus [r0, R0].
struct EnvelopePair {
  std::vector<PeriodicFn> b1, b2; // one per component
  double r0 = 0.0, R0 = 0.0;
  void validate(int n, double omega) const; // (H6)/(H7) structural checks
  bool operator==(const EnvelopePair&) const = default;
};

/// Liminf/limsup of F_i(t,u) / (d_i(t) u) as u -> 0+ and u -> infinity,
/// componentwise; +infinity entries allowed.
struct LimitProfile {
  std::vector<double> f0, F0, finf, Finf;
  void validate(int n) const;
  bool operator==(const LimitProfile&) const = default;
};

/// State access used to evaluate a birth term: `value(s)` is the
/// left-continuous component value at absolute time s, `term_integral(l,a,b)`
/// integrates the term-l inner integrand over [a, b].
struct StateAccess {
  std::function<double(double)> value;
  std::function<double(int, double, double)> term_integral;
};

/// Inner integrand of a distributed term at time s with state value xv.
double term_inner_integrand(NonlinKind kind, const NonlinTerm& term, double s,
                            double xv);

/// g_i(t, x_it) for the descriptor, reading the state through `x`.
double eval_birth(const NonlinearityDescriptor& d, double t, const StateAccess& x);

/// The delay-window rate floor b_i(t) used by the bounded-nonlinearity
/// criteria; exact closed-form evaluation (inner weights integrate via the
/// Fourier antiderivative). Only defined for kinds with vanishing birth at 0.
std::function<double(double)> derived_rate_floor(const NonlinearityDescriptor& d);

} // namespace pdde
