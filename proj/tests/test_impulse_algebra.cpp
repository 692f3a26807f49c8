#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "pdde/impulse_algebra.hpp"
#include "pdde/model_zoo.hpp"

using namespace pdde;

namespace {
constexpr double kPi = std::numbers::pi;

SystemSpec scalar_with(double omega, PeriodicFn d, ImpulseSchedule sch = {}) {
  SystemSpec s;
  s.n = 1;
  s.omega = omega;
  s.death = {std::move(d)};
  s.coupling = {{PeriodicFn::constant(omega, 0.0, true)}};
  NonlinTerm term;
  term.beta = PeriodicFn::constant(omega, 1.0, true);
  term.c = PeriodicFn::constant(omega, 1.0, true);
  term.tau = PeriodicFn::constant(omega, 1.0, true);
  s.birth = {{NonlinKind::nicholson_discrete, {term}}};
  s.impulses = std::move(sch);
  return s;
}

GridFunction unit(const SystemSpec& s, double level = 1.0) {
  return GridFunction::constant(
      s.omega, std::vector<double>(std::size_t(s.n), level),
      s.impulses.instants, 64);
}
} // namespace

TEST_CASE("decay integral closed forms") {
  auto s2 = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true));
  CHECK(decay_integral(s2, 0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(decay_integral(s2, 0, 0.0) == 0.0);
  auto ss = scalar_with(kPi, PeriodicFn(kPi, 0.5, {-0.5}, {}, true, "sin^2"));
  CHECK(decay_integral(ss, 0, kPi) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("jump ratio values") {
  CHECK(ImpulseMap::linear(1.0).jump_ratio(3.0) == doctest::Approx(0.5));
  CHECK(ImpulseMap::none().jump_ratio(123.0) == 1.0);
  CHECK(ImpulseMap::none().jump_ratio(0.0) == 1.0);
  // saturating with slope 1 at unit scale: I(1) = 1/2, ratio = 1/(1+1/2) = 2/3
  CHECK(ImpulseMap::saturating(1.0, 1.0).jump_ratio(1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("window products") {
  // no impulses: empty product
  auto plain = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true));
  auto x = unit(plain);
  CHECK(window_product(plain, 0, x, 0.1, 0.9) == 1.0);

  // one linear impulse of size 1 inside the window
  ImpulseSchedule sch;
  sch.instants = {0.5};
  sch.maps = {{ImpulseMap::linear(1.0)}};
  auto s = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true), sch);
  auto xs = unit(s);
  CHECK(window_product(s, 0, xs, 0.25, 0.75) == doctest::Approx(0.5));
  CHECK(window_product(s, 0, xs, 0.6, 0.9) == 1.0);
  // instant at the left edge is included, at the right edge excluded
  CHECK(window_product(s, 0, xs, 0.5, 0.75) == doctest::Approx(0.5));
  CHECK(window_product(s, 0, xs, 0.25, 0.5) == 1.0);
}

TEST_CASE("window product shift invariance") {
  ImpulseSchedule sch;
  sch.instants = {0.2, 0.7};
  sch.maps = {{ImpulseMap::linear(0.5)}, {ImpulseMap::saturating(0.8, 2.0)}};
  auto s = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true), sch);
  auto x = GridFunction::from_sampler(1.0, sch.instants, 64, 1, [](int, double t) {
    return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * t);
  });
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double a = U(rng);
    const double b = a + U(rng);
    if (b > a + 1.0) continue;
    const double p1 = window_product(s, 0, x, a, b);
    const double p2 = window_product(s, 0, x, a + 1.0, b + 1.0);
    CHECK(p1 == doctest::Approx(p2).epsilon(1e-14));
  }
}

TEST_CASE("window product cocycle") {
  ImpulseSchedule sch;
  sch.instants = {0.2, 0.7};
  sch.maps = {{ImpulseMap::linear(0.5)}, {ImpulseMap::linear(-0.3)}};
  auto s = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true), sch);
  auto x = unit(s);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    double t = U(rng), u = U(rng), r = U(rng);
    double lo = t, mid = t + u * 0.5, hi = t + (u * 0.5 + r * 0.5);
    const double whole = window_product(s, 0, x, lo, hi);
    const double split =
        window_product(s, 0, x, lo, mid) * window_product(s, 0, x, mid, hi);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
  }
}

TEST_CASE("periodic gain") {
  // no impulses, decay pi/2 over the period
  auto ss = scalar_with(kPi, PeriodicFn(kPi, 0.5, {-0.5}, {}, true, "sin^2"));
  auto x = unit(ss);
  CHECK(periodic_gain(ss, 0, x) ==
        doctest::Approx(1.0 / (std::exp(kPi / 2.0) - 1.0)).epsilon(1e-14));

  // linear impulses whose ratio product is 1 collapse to the plain gain
  ImpulseSchedule sch;
  sch.instants = {0.3, 0.8};
  sch.maps = {{ImpulseMap::linear(0.25)}, {ImpulseMap::linear(-0.2)}};
  auto s = scalar_with(1.0, PeriodicFn::constant(1.0, 2.0, true), sch);
  auto xs = unit(s);
  CHECK(periodic_gain(s, 0, xs) ==
        doctest::Approx(1.0 / (std::exp(2.0) - 1.0)).epsilon(1e-13));

  // single linear impulse eta with e^{2 omega} = 2: gain = (1+eta)/(1-eta)
  const double omega = std::log(2.0) / 2.0;
  for (double eta : {0.1, 0.3, 0.6}) {
    ImpulseSchedule one;
    one.instants = {omega / 2.0};
    one.maps = {{ImpulseMap::linear(eta)}};
    auto si = scalar_with(omega, PeriodicFn::constant(omega, 2.0, true), one);
    auto xi = unit(si);
    CHECK(periodic_gain(si, 0, xi) ==
          doctest::Approx((1.0 + eta) / (1.0 - eta)).epsilon(1e-12));
  }

  // inadmissible schedule: ratio product defeats the decay
  ImpulseSchedule big;
  big.instants = {omega / 2.0};
  big.maps = {{ImpulseMap::linear(1.5)}}; // e^{2 omega} = 2 < 1 + 1.5
  auto sb = scalar_with(omega, PeriodicFn::constant(omega, 2.0, true), big);
  auto xb = unit(sb);
  CHECK_THROWS_AS((void)periodic_gain(sb, 0, xb), ModelError);
}

TEST_CASE("bounds collapse without impulses") {
  auto ss = scalar_with(kPi, PeriodicFn(kPi, 0.5, {-0.5}, {}, true, "sin^2"));
  auto b = impulse_bounds(ss)[0];
  const double eD = std::exp(kPi / 2.0);
  CHECK(b.window_min == 1.0);
  CHECK(b.window_max == 1.0);
  CHECK(b.gain_min == doctest::Approx(1.0 / (eD - 1.0)).epsilon(1e-14));
  CHECK(b.gain_max == doctest::Approx(1.0 / (eD - 1.0)).epsilon(1e-14));
  CHECK(b.pw_mult_min == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b.pw_mult_max == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b.cone_sigma == doctest::Approx(std::exp(-kPi / 2.0)).epsilon(1e-13));
  CHECK(b.avg_mult_min == doctest::Approx(1.0 / (eD - 1.0)).epsilon(1e-13));
  CHECK(b.avg_mult_max == doctest::Approx(eD / (eD - 1.0)).epsilon(1e-13));
}

TEST_CASE("planar impulse multipliers match the closed forms") {
  const double omega = std::log(2.0) / 2.0;
  const double E = std::exp(2.0 * omega); // = 2
  for (double eta : {0.0, 0.1, 0.2, 0.3}) {
    auto e = planar_autonomous_example(omega, eta, eta);
    auto b = impulse_bounds(e.spec);
    const double m1 = (E - 1.0) / (E - (1.0 + eta));
    const double m2 = (E - 1.0) / (E / (1.0 + eta) - 1.0);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(b[std::size_t(i)].pw_mult_min - m1) <= 1e-12);
      CHECK(std::abs(b[std::size_t(i)].pw_mult_max - m2) <= 1e-12);
      if (eta > 0.0) {
        CHECK(b[std::size_t(i)].window_min ==
              doctest::Approx(1.0 / (1.0 + eta)).epsilon(1e-14));
        CHECK(b[std::size_t(i)].window_max == 1.0);
      }
    }
  }
  // eta above e^{2 omega} - 1 refuses with the H3 tag
  auto bad = scalar_with(omega, PeriodicFn::constant(omega, 2.0, true));
  bad.impulses.instants = {omega / 2.0};
  bad.impulses.maps = {{ImpulseMap::linear(1.2)}};
  try {
    (void)impulse_bounds(bad);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(e.tag() == "H3");
  }
}

TEST_CASE("sandwich property on random windows") {
  ImpulseSchedule sch;
  sch.instants = {0.15, 0.55, 0.85};
  sch.maps = {{ImpulseMap::linear(0.5)},
              {ImpulseMap::saturating(0.9, 1.5)},
              {ImpulseMap::bounded_slope(-0.2, 0.4,
                                         {{0.0, 0.0}, {1.0, 0.2}, {3.0, 1.0}})}};
  auto s = scalar_with(1.0, PeriodicFn::constant(1.0, 3.0, true), sch);
  auto x = GridFunction::from_sampler(1.0, sch.instants, 128, 1, [](int, double t) {
    return 0.5 + std::abs(std::sin(7.0 * t));
  });
  auto b = impulse_bounds(s)[0];
  auto xx = unit(s);
  const double gamma = periodic_gain(s, 0, x);
  CHECK(gamma >= b.gain_min - 1e-12);
  CHECK(gamma <= b.gain_max + 1e-12);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = U(rng) * 2.0;
    const double w = U(rng);
    const double p = window_product(s, 0, x, a, a + w);
    CHECK(p >= b.window_min - 1e-12);
    CHECK(p <= b.window_max + 1e-12);
  }
  (void)xx;
}
