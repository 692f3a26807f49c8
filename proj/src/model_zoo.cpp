#include "pdde/model_zoo.hpp"

#include <cmath>
#include <numbers>

namespace pdde {

namespace {

constexpr double kPi = std::numbers::pi;

PeriodicFn f_const(double omega, double v, const std::string& name) {
  return PeriodicFn::constant(omega, v, true, name);
}

PeriodicFn zero(double omega) { return PeriodicFn::constant(omega, 0.0, true); }

std::vector<std::vector<PeriodicFn>> no_coupling(double omega, int n) {
  return std::vector<std::vector<PeriodicFn>>(
      std::size_t(n), std::vector<PeriodicFn>(std::size_t(n), zero(omega)));
}

} // namespace

ZooEntry scalar_nicholson_example() {
  ZooEntry e;
  e.id = "scalar_nicholson";
  const double omega = kPi;
  SystemSpec s;
  s.n = 1;
  s.omega = omega;
  // sin^2 t and 3 cos^2 t over the period pi
  s.death = {PeriodicFn(omega, 0.5, {-0.5}, {}, true, "d")};
  s.coupling = no_coupling(omega, 1);
  NonlinTerm term;
  term.beta = PeriodicFn(omega, 1.5, {1.5}, {}, true, "p");
  term.c = f_const(omega, 1.0, "c");
  term.tau = f_const(omega, 1.0, "tau");
  s.birth = {{NonlinKind::nicholson_discrete, {term}}};
  e.spec = s;
  e.spec.validate();

  e.expected["birth_rate_period_integral"] = {1.5 * kPi, 1e-9, "closed form"};
  e.expected["decay_gain_denominator"] = {std::exp(kPi / 2.0) - 1.0, 1e-9,
                                          "closed form"};
  e.expected["average_pass_eps"] = {0.1, 0.0, "computed"};

  EnvelopePair env;
  env.b1 = {PeriodicFn(omega, 1.35, {1.35}, {}, true, "b1")};
  env.b2 = {f_const(omega, 0.1, "b2")};
  env.r0 = -std::log(0.9); // where u e^{-u} >= 0.9 u stops holding
  env.R0 = std::log(30.0); // where 3 u e^{-u} <= 0.1 u starts holding
  e.canonical_envelopes = env;
  e.default_theorem = TheoremId::T3_3_average;
  e.note = "mortality vanishes where the birth rate peaks; the average "
           "criterion certifies, the pointwise one cannot";
  return e;
}

ZooEntry planar_autonomous_example(double omega, double eta1, double eta2) {
  ZooEntry e;
  e.id = "planar_autonomous";
  SystemSpec s;
  s.n = 2;
  s.omega = omega;
  s.death = {f_const(omega, 2.0, "d1"), f_const(omega, 2.0, "d2")};
  s.coupling = no_coupling(omega, 2);
  s.coupling[0][1] = f_const(omega, 1.0, "a1");
  s.coupling[1][0] = f_const(omega, 1.0, "a2");
  NonlinTerm term;
  term.beta = f_const(omega, 1.0, "beta");
  term.c = f_const(omega, 1.0, "c");
  term.tau = f_const(omega, 1.0, "tau");
  s.birth = {{NonlinKind::nicholson_discrete, {term}},
             {NonlinKind::nicholson_discrete, {term}}};
  if (eta1 != 0.0 || eta2 != 0.0) {
    s.impulses.instants = {omega / 2.0};
    s.impulses.maps = {{ImpulseMap::linear(eta1), ImpulseMap::linear(eta2)}};
  }
  LimitProfile lp;
  lp.f0 = {0.5, 0.5};
  lp.F0 = {0.5, 0.5};
  lp.finf = {0.0, 0.0};
  lp.Finf = {0.0, 0.0};
  s.limits = lp;
  e.spec = s;
  e.spec.validate();

  const double E = std::exp(2.0 * omega);
  auto m1 = [E](double eta) { return (E - 1.0) / (E - (1.0 + eta)); };
  auto m2 = [E](double eta) { return (E - 1.0) / (E / (1.0 + eta) - 1.0); };
  e.expected["pw_mult_min_1"] = {m1(eta1), 1e-12, "closed form"};
  e.expected["pw_mult_max_1"] = {m2(eta1), 1e-12, "closed form"};
  e.expected["pw_mult_min_2"] = {m1(eta2), 1e-12, "closed form"};
  e.expected["pw_mult_max_2"] = {m2(eta2), 1e-12, "closed form"};
  e.expected["impulse_threshold"] = {(E - 1.0) / (E + 1.0), 1e-12, "closed form"};
  e.default_theorem = TheoremId::T4_2_planar;
  e.note = "without impulses every orbit drains to zero; a small positive "
           "impulse below the threshold creates a positive periodic orbit";
  return e;
}

ZooEntry hematopoiesis_system() {
  ZooEntry e;
  e.id = "hematopoiesis";
  const double omega = 2.0 * kPi;
  SystemSpec s;
  s.n = 2;
  s.omega = omega;
  s.death = {PeriodicFn(omega, 0.5, {}, {0.2}, true, "d1"),
             PeriodicFn(omega, 0.6, {0.2}, {}, true, "d2")};
  s.coupling = no_coupling(omega, 2);
  s.coupling[0][1] = PeriodicFn(omega, 0.1, {0.05}, {}, true, "a12");
  s.coupling[1][0] = PeriodicFn(omega, 0.1, {}, {0.05}, true, "a21");
  NonlinTerm t1, t2;
  t1.beta = PeriodicFn(omega, 1.0, {}, {0.5}, true, "beta1");
  t1.c = f_const(omega, 1.0, "c1");
  t1.tau = f_const(omega, 1.0, "tau1");
  t1.alpha = 2.0;
  t2.beta = PeriodicFn(omega, 1.2, {0.5}, {}, true, "beta2");
  t2.c = f_const(omega, 1.0, "c2");
  t2.tau = f_const(omega, 1.0, "tau2");
  t2.alpha = 2.0;
  s.birth = {{NonlinKind::hematopoiesis_distributed, {t1}},
             {NonlinKind::hematopoiesis_distributed, {t2}}};
  s.impulses.instants = {kPi};
  s.impulses.maps = {{ImpulseMap::linear(0.1), ImpulseMap::linear(0.1)}};
  e.spec = s;
  e.spec.validate();
  e.default_theorem = TheoremId::T4_1_hematopoiesis;
  e.note = "monotone decreasing birth; only the coupling smallness binds";
  return e;
}

ZooEntry nicholson_distributed_system() {
  ZooEntry e;
  e.id = "nicholson_distributed";
  const double omega = 2.0 * kPi;
  SystemSpec s;
  s.n = 2;
  s.omega = omega;
  s.death = {PeriodicFn(omega, 0.6, {}, {0.2}, true, "d1"),
             PeriodicFn(omega, 0.7, {0.2}, {}, true, "d2")};
  s.coupling = no_coupling(omega, 2);
  s.coupling[0][1] = PeriodicFn(omega, 0.05, {0.05}, {}, true, "a12");
  s.coupling[1][0] = PeriodicFn(omega, 0.05, {}, {0.05}, true, "a21");
  NonlinTerm t1, t2;
  t1.beta = PeriodicFn(omega, 2.0, {}, {1.0}, true, "beta1");
  t1.gamma = f_const(omega, 1.0, "gamma1");
  t1.c = f_const(omega, 1.0, "c1");
  t1.tau = f_const(omega, 0.8, "tau1");
  t2.beta = PeriodicFn(omega, 2.0, {1.0}, {}, true, "beta2");
  t2.gamma = f_const(omega, 1.0, "gamma2");
  t2.c = f_const(omega, 1.0, "c2");
  t2.tau = f_const(omega, 0.8, "tau2");
  s.birth = {{NonlinKind::nicholson_distributed, {t1}},
             {NonlinKind::nicholson_distributed, {t2}}};
  s.impulses.instants = {1.0};
  s.impulses.maps = {
      {ImpulseMap::saturating(0.15, 1.0), ImpulseMap::saturating(0.15, 1.0)}};
  e.spec = s;
  e.spec.validate();
  e.default_theorem = TheoremId::T_N1_nicholson;
  e.note = "distributed window births with a saturating impulse";
  return e;
}

ZooEntry nicholson_mixed_system() {
  ZooEntry e;
  e.id = "nicholson_mixed";
  const double omega = 2.0 * kPi;
  SystemSpec s;
  s.n = 1;
  s.omega = omega;
  s.death = {f_const(omega, 0.2, "d")};
  s.coupling = no_coupling(omega, 1);
  NonlinTerm term;
  term.beta = PeriodicFn(omega, 1.6, {}, {0.5}, true, "beta");
  term.c = f_const(omega, 1.0, "c");
  term.tau = f_const(omega, 0.5, "tau");
  term.theta = f_const(omega, 1.0, "theta");
  s.birth = {{NonlinKind::nicholson_mixed, {term}}};
  e.spec = s;
  e.spec.validate();
  const double eD = std::exp(0.2 * omega);
  e.expected["average_floor_threshold"] = {eD * (eD - 1.0), 1e-12, "closed form"};
  e.expected["birth_integral"] = {1.6 * omega, 1e-12, "closed form"};
  e.default_theorem = TheoremId::T4_4_mixed;
  e.note = "two different delays feed the same birth term";
  return e;
}

ZooEntry mackey_glass_system() {
  ZooEntry e;
  e.id = "mackey_glass";
  const double omega = 2.0 * kPi;
  SystemSpec s;
  s.n = 1;
  s.omega = omega;
  s.death = {PeriodicFn(omega, 0.3, {0.1}, {}, true, "d")};
  s.coupling = no_coupling(omega, 1);
  NonlinTerm term;
  term.beta = PeriodicFn(omega, 2.0, {1.0}, {}, true, "beta");
  term.c = f_const(omega, 1.0, "c");
  term.tau = f_const(omega, 1.0, "tau");
  term.alpha = 2.0;
  s.birth = {{NonlinKind::mackey_glass_distributed, {term}}};
  s.impulses.instants = {2.0};
  s.impulses.maps = {{ImpulseMap::linear(0.3)}};
  e.spec = s;
  e.spec.validate();
  e.default_theorem = TheoremId::T3_4_bounded;
  e.note = "unimodal window birth with one linear impulse";
  return e;
}

std::vector<std::string> zoo_ids() {
  return {"scalar_nicholson",      "planar_autonomous", "hematopoiesis",
          "nicholson_distributed", "nicholson_mixed",   "mackey_glass"};
}

ZooEntry zoo_get(const std::string& id) {
  if (id == "scalar_nicholson") return scalar_nicholson_example();
  if (id == "planar_autonomous")
    return planar_autonomous_example(std::log(2.0) / 2.0, 0.2, 0.2);
  if (id == "hematopoiesis") return hematopoiesis_system();
  if (id == "nicholson_distributed") return nicholson_distributed_system();
  if (id == "nicholson_mixed") return nicholson_mixed_system();
  if (id == "mackey_glass") return mackey_glass_system();
  throw ModelError("config", "unknown zoo id '" + id + "'");
}

} // namespace pdde
