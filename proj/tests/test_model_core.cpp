#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "pdde/config_io.hpp"
#include "pdde/grid_function.hpp"
#include "pdde/model_zoo.hpp"
#include "pdde/system.hpp"

using namespace pdde;

namespace {
constexpr double kPi = std::numbers::pi;

PeriodicFn sin_sq() { return PeriodicFn(kPi, 0.5, {-0.5}, {}, true, "sin^2"); }
PeriodicFn three_cos_sq() { return PeriodicFn(kPi, 1.5, {1.5}, {}, true, "3cos^2"); }
} // namespace

TEST_CASE("periodic function evaluation") {
  CHECK(sin_sq().eval(kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(three_cos_sq().eval(0.0) == doctest::Approx(3.0).epsilon(1e-14));
  const auto c2 = PeriodicFn::constant(1.0, 2.0);
  CHECK(c2.eval(0.37) == 2.0);
  CHECK(c2.eval(123.456) == 2.0);
}

TEST_CASE("periodicity holds at random arguments") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  const PeriodicFn f(2.0, 1.0, {0.3, -0.1}, {0.2, 0.05}, false, "f");
  for (int k = 0; k < 1000; ++k) {
    const double t = U(rng);
    const double a = f.eval(t), b = f.eval(t + f.period());
    CHECK(std::abs(b - a) <= 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("nonneg flag rejects genuinely negative values") {
  const PeriodicFn bad(1.0, 0.0, {1.0}, {}, true, "bad");
  CHECK_THROWS_AS((void)bad.eval(0.5), ModelError); // cos(pi) = -1
  // roundoff-level dips clamp to zero
  CHECK(sin_sq().eval(0.0) >= 0.0);
  CHECK(sin_sq().eval(kPi) >= 0.0);
}

TEST_CASE("exact antiderivative") {
  CHECK(sin_sq().antiderivative(kPi) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(sin_sq().antiderivative(0.0) == 0.0);
  const auto c2 = PeriodicFn::constant(2.0, 2.0);
  CHECK(c2.antiderivative(1.0) == doctest::Approx(2.0));
  // d/dt check against a finite difference
  const PeriodicFn f(2.0, 1.0, {0.3}, {0.2}, false, "f");
  const double h = 1e-6, t = 0.73;
  const double fd = (f.antiderivative(t + h) - f.antiderivative(t - h)) / (2 * h);
  CHECK(fd == doctest::Approx(f.eval(t)).epsilon(1e-8));
}

TEST_CASE("impulse map slope sandwich by sampling") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> U(1e-9, 10.0);
  const std::vector<ImpulseMap> maps = {
      ImpulseMap::linear(0.5), ImpulseMap::linear(-0.4),
      ImpulseMap::saturating(1.0, 1.0),
      ImpulseMap::bounded_slope(0.1, 1.0, {{0.0, 0.0}, {1.0, 0.8}, {2.0, 1.0}}),
  };
  for (const auto& m : maps) {
    for (int k = 0; k < 1000; ++k) {
      const double u = U(rng);
      const double I = m.apply(u);
      CHECK(I >= m.lower_slope() * u - 1e-12 * (1.0 + std::abs(I)));
      CHECK(I <= m.upper_slope() * u + 1e-12 * (1.0 + std::abs(I)));
      const double r = m.jump_ratio(u);
      CHECK(r >= 1.0 / (1.0 + m.upper_slope()) - 1e-12);
      CHECK(r <= 1.0 / (1.0 + m.lower_slope()) + 1e-12);
    }
  }
}

TEST_CASE("impulse map constructors reject bad slopes") {
  CHECK_THROWS_AS(ImpulseMap::linear(-1.5), ModelError);
  CHECK_THROWS_AS(ImpulseMap::bounded_slope(0.5, 0.1, {{0.0, 0.0}, {1.0, 0.3}}),
                  ModelError);
  CHECK_THROWS_AS(ImpulseMap::saturating(-1.0, 1.0), ModelError);
}

TEST_CASE("schedule validation") {
  ImpulseSchedule sch;
  sch.instants = {0.5, 0.2};
  sch.maps = {{ImpulseMap::none()}, {ImpulseMap::none()}};
  CHECK_THROWS_AS(sch.validate(1, 1.0), ModelError);
  sch.instants = {0.2, 1.5};
  CHECK_THROWS_AS(sch.validate(1, 1.0), ModelError);
  sch.instants = {0.2, 0.5};
  CHECK_NOTHROW(sch.validate(1, 1.0));
}

TEST_CASE("load_system accepts the worked examples and tags violations") {
  // planar constant-coefficient instance
  auto planar = planar_autonomous_example(std::log(2.0) / 2.0, 0.2, 0.2);
  CHECK(planar.spec.n == 2);
  CHECK_NOTHROW(planar.spec.validate());

  auto scalar = scalar_nicholson_example();
  CHECK_NOTHROW(scalar.spec.validate());

  // impulse slope at -1.5 must raise an H2 error through the config path
  json j = save_system(planar.spec);
  j["impulses"]["maps"][0][0]["eta"] = -1.5;
  try {
    (void)load_system(j);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(e.tag() == "H2");
  }

  // zero mortality integral -> H4
  json j2 = save_system(scalar.spec);
  j2["components"][0]["death"] = {{"mean", 0.0}, {"cos", json::array()},
                                  {"sin", json::array()}};
  try {
    (void)load_system(j2);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(e.tag() == "H4");
  }

  // n > 1 with a starved component -> H4
  json j3 = save_system(planar.spec);
  j3["components"][0]["coupling"][1] = {{"mean", 0.0}, {"cos", json::array()},
                                        {"sin", json::array()}};
  try {
    (void)load_system(j3);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(e.tag() == "H4");
  }
}

TEST_CASE("config round-trip is the identity") {
  for (const auto& id : zoo_ids()) {
    ZooEntry e = zoo_get(id);
    const json once = save_system(e.spec);
    SystemSpec again = load_system(once);
    const json twice = save_system(again);
    CHECK(once.dump() == twice.dump());
  }
}

TEST_CASE("grid function history reads") {
  // constant function
  GridFunction c = GridFunction::constant(1.0, {2.0});
  for (double t : {-3.7, 0.0, 0.25, 0.999, 55.5})
    CHECK(c.eval(0, t) == doctest::Approx(2.0).epsilon(1e-13));

  // |sin t| over a pi-period equals sin t on [0, pi]
  GridFunction s = GridFunction::from_sampler(
      kPi, {}, 256, 1, [](int, double t) { return std::sin(t); });
  // window at t = pi, tau = pi/2, query s = -pi/2 -> value at pi/2 = 1
  CHECK(s.eval(0, kPi - kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-9));
  // interpolation between nodes stays 4th-order accurate
  CHECK(s.eval(0, 0.61803) == doctest::Approx(std::sin(0.61803)).epsilon(1e-9));

  // left value at an impulse breakpoint
  GridFunction g(GridFunction::make_grid(1.0, {0.5}, 8), 1, 1.0, {4});
  for (std::size_t m = 0; m < g.nodes(); ++m) g.set_both(m, 0, 1.0);
  g.set(4, 0, 1.0, 2.0);
  g.close_periodically();
  CHECK(g.eval(0, 0.5) == 1.0);
  CHECK(g.eval_right(0, 0.5) == 2.0);
  // a hair above the breakpoint the right branch rules
  CHECK(g.eval(0, 0.5 + 1e-6) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("max delay is precomputed and finite") {
  auto e = scalar_nicholson_example();
  CHECK(e.spec.max_delay() == doctest::Approx(1.0));
}

TEST_CASE("history window evaluator") {
  GridFunction c = GridFunction::constant(1.0, {2.0});
  auto w = c.history_window(5.3, 1.0);
  for (double s : {-1.0, -0.5, 0.0}) CHECK(w(0, s) == doctest::Approx(2.0));

  GridFunction sine = GridFunction::from_sampler(
      kPi, {}, 256, 1, [](int, double t) { return std::sin(t); });
  auto ws = sine.history_window(kPi, kPi / 2.0);
  CHECK(ws(0, -kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-9));

  // straddling an impulse instant: the left value is reported at the instant
  GridFunction g(GridFunction::make_grid(1.0, {0.5}, 8), 1, 1.0, {4});
  for (std::size_t m = 0; m < g.nodes(); ++m) g.set_both(m, 0, 1.0);
  g.set(4, 0, 1.0, 2.0);
  g.close_periodically();
  auto wg = g.history_window(0.9, 0.8);
  CHECK(wg(0, -0.4) == 1.0); // reads exactly t = 0.5
  CHECK_THROWS_AS((void)wg(0, -0.9), ModelError);

  CHECK_THROWS_AS((void)c.history_window(0.0, -1.0), ModelError);
}

TEST_CASE("H1 violations carry their tag through the config path") {
  auto e = planar_autonomous_example(std::log(2.0) / 2.0, 0.2, 0.2);
  json j = save_system(e.spec);
  j["impulses"]["instants"][0] = 2.0 * e.spec.omega; // outside [0, omega)
  try {
    (void)load_system(j);
    CHECK(false);
  } catch (const ModelError& err) {
    CHECK(err.tag() == "H1");
  }
}
