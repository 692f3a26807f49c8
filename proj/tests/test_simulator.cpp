#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pdde/model_zoo.hpp"
#include "pdde/phi_operator.hpp"
#include "pdde/simulator.hpp"

using namespace pdde;

namespace {
constexpr double kPi = std::numbers::pi;

// scalar linear decay x' = -x (no birth, no coupling); mortality constant 1
SystemSpec decay_spec() {
  SystemSpec s;
  s.n = 1;
  s.omega = 1.0;
  s.death = {PeriodicFn::constant(1.0, 1.0, true)};
  s.coupling = {{PeriodicFn::constant(1.0, 0.0, true)}};
  s.birth = {{NonlinKind::nicholson_discrete, {}}}; // no terms: g == 0
  return s;
}
} // namespace

TEST_CASE("linear decay reaches e^{-1} at t = 1") {
  auto s = decay_spec();
  auto hist = GridFunction::constant(1.0, {1.0});
  SimOptions opts;
  opts.step = 1e-3;
  auto traj = integrate(s, hist, 1.0, opts);
  CHECK(traj.value(0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("fourth-order convergence on the decay test") {
  auto s = decay_spec();
  auto hist = GridFunction::constant(1.0, {1.0});
  auto err = [&](double h) {
    SimOptions opts;
    opts.step = h;
    auto traj = integrate(s, hist, 1.0, opts);
    return std::abs(traj.value(0, 1.0) - std::exp(-1.0));
  };
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double ratio = err(h) / err(h / 2.0);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("impulse applied algebraically at the instant") {
  // state frozen except for one linear impulse of size 0.5 at t = 1
  SystemSpec s;
  s.n = 1;
  s.omega = 2.0;
  s.death = {PeriodicFn::constant(2.0, 0.0, true)}; // x' = 0 between impulses
  s.coupling = {{PeriodicFn::constant(2.0, 0.0, true)}};
  s.birth = {{NonlinKind::nicholson_discrete, {}}};
  s.impulses.instants = {1.0};
  s.impulses.maps = {{ImpulseMap::linear(0.5)}};
  auto hist = GridFunction::constant(2.0, {1.0}, s.impulses.instants, 16);
  auto traj = integrate(s, hist, 1.5);
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.events[0].t == doctest::Approx(1.0));
  CHECK(traj.events[0].before[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.events[0].after[0] == doctest::Approx(1.5).epsilon(1e-12));
  // left-continuous read at the instant, right value just after
  CHECK(traj.value(0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(traj.value(0, 1.0 + 1e-9) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("planar extinction decays algebraically") {
  auto e = planar_autonomous_example(std::log(2.0) / 2.0, 0.0, 0.0);
  auto hist = GridFunction::constant(e.spec.omega, {1.0, 1.0});
  SimOptions opts;
  opts.step = 0.05;
  auto traj = integrate(e.spec, hist, 200.0, opts);
  auto floors = long_run_floor(traj, 10.0);
  // the state decays like ~2/t: visibly small but far above 1e-4 at t = 200
  CHECK(floors[0] < 2e-2);
  CHECK(floors[0] > 1e-4);
  CHECK(traj.value(0, 200.0) < traj.value(0, 50.0));
  CHECK(traj.worst_negative >= -1e-10);
}

TEST_CASE("admissible impulses hold the planar system away from zero") {
  auto e = planar_autonomous_example(std::log(2.0) / 2.0, 0.2, 0.2);
  auto hist = GridFunction::constant(e.spec.omega, {1.0, 1.0},
                                     e.spec.impulses.instants, 16);
  SimOptions opts;
  opts.step = 0.01;
  auto traj = integrate(e.spec, hist, 60.0, opts);
  auto floors = long_run_floor(traj, 5.0);
  CHECK(floors[0] > 0.3);
  CHECK(floors[1] > 0.3);
}

TEST_CASE("periodicity residual") {
  // constant equilibrium: mortality 1, birth pinned at 1 -> x* == 1
  SystemSpec s;
  s.n = 1;
  s.omega = 1.0;
  s.death = {PeriodicFn::constant(1.0, 1.0, true)};
  s.coupling = {{PeriodicFn::constant(1.0, 0.0, true)}};
  NonlinTerm term;
  term.beta = PeriodicFn::constant(1.0, 1.0, true);
  term.tau = PeriodicFn::constant(1.0, 0.4, true);
  term.table.u = {0.0, 1.0};
  term.table.f = {1.0, 1.0};
  s.birth = {{NonlinKind::custom_table, {term}}};
  auto hist = GridFunction::constant(1.0, {1.0});
  auto traj = integrate(s, hist, 5.0);
  CHECK(periodicity_residual(traj, 1.0, 1.0) <= 1e-10);

  // transient residual shrinks as the probe moves later
  auto e = scalar_nicholson_example();
  auto h2 = GridFunction::constant(e.spec.omega, {0.4});
  SimOptions opts;
  opts.step = e.spec.omega / 512.0;
  auto t2 = integrate(e.spec, h2, 40.0 * e.spec.omega, opts);
  const double early = periodicity_residual(t2, e.spec.omega, 2.0 * e.spec.omega);
  const double late = periodicity_residual(t2, e.spec.omega, 36.0 * e.spec.omega);
  CHECK(late < early);
}

TEST_CASE("positivity preserved across the zoo") {
  for (const auto& id : zoo_ids()) {
    auto e = zoo_get(id);
    auto hist = GridFunction::constant(
        e.spec.omega, std::vector<double>(std::size_t(e.spec.n), 1.0),
        e.spec.impulses.instants, 16);
    auto traj = integrate(e.spec, hist, 5.0 * e.spec.omega);
    CHECK(traj.worst_negative >= -1e-10);
    CHECK(traj.finite);
  }
}

TEST_CASE("fixed point round-trips through the integrator") {
  auto e = nicholson_mixed_system();
  auto res = solve_fixed_point(e.spec);
  REQUIRE(res.converged_positive());
  auto traj = integrate(e.spec, res.solution, 3.0 * e.spec.omega);
  CHECK(periodicity_residual(traj, e.spec.omega, 0.0) <= 1e-5);
}
