#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pdde/config_io.hpp"
#include "pdde/impulse_algebra.hpp"
#include "pdde/model_zoo.hpp"

using namespace pdde;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("every entry validates and round-trips") {
  for (const auto& id : zoo_ids()) {
    ZooEntry e = zoo_get(id);
    CHECK(e.id == id);
    CHECK_NOTHROW(e.spec.validate());
    const json once = save_system(e.spec);
    const json twice = save_system(load_system(once));
    CHECK(once.dump() == twice.dump());
  }
}

TEST_CASE("scalar blowflies entry carries its reported quantities") {
  auto e = scalar_nicholson_example();
  const auto& q1 = e.expected.at("birth_rate_period_integral");
  CHECK(std::abs(e.spec.birth[0].terms[0].beta.period_integral() - q1.value) <=
        q1.tol);
  CHECK(q1.value == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-15));
  const auto& q2 = e.expected.at("decay_gain_denominator");
  const double eD = std::exp(decay_integral(e.spec, 0, e.spec.omega));
  CHECK(std::abs((eD - 1.0) - q2.value) <= q2.tol);
  CHECK(q2.value == doctest::Approx(3.810477).epsilon(1e-6));

  // the birth rate is NOT pointwise above mortality: p < d near pi/2
  const auto& p = e.spec.birth[0].terms[0].beta;
  const auto& d = e.spec.death[0];
  CHECK(p.eval(kPi / 2.0) < d.eval(kPi / 2.0));
  // yet the average criterion certifies (3 pi / 2 > e^{pi/2} - 1)
  CHECK(q1.value > q2.value);
  auto r = certify(e.spec, TheoremId::T3_3_average, std::nullopt, false);
  CHECK(r.pass);
}

TEST_CASE("planar entry reproduces its multiplier formulas") {
  const double omega = std::log(2.0) / 2.0;
  for (double eta : {0.0, 0.1, 0.2, 0.3}) {
    auto e = planar_autonomous_example(omega, eta, eta);
    auto b = impulse_bounds(e.spec);
    CHECK(std::abs(b[0].pw_mult_min - e.expected.at("pw_mult_min_1").value) <=
          e.expected.at("pw_mult_min_1").tol);
    CHECK(std::abs(b[0].pw_mult_max - e.expected.at("pw_mult_max_1").value) <=
          e.expected.at("pw_mult_max_1").tol);
  }
  auto e = planar_autonomous_example(omega, 0.2, 0.2);
  CHECK(e.expected.at("impulse_threshold").value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // collapse at eta = 0
  auto e0 = planar_autonomous_example(omega, 0.0, 0.0);
  auto b0 = impulse_bounds(e0.spec);
  CHECK(b0[0].pw_mult_min == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b0[0].pw_mult_max == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b0[0].window_min == 1.0);
}

TEST_CASE("default theorems certify their entries") {
  for (const auto& id : zoo_ids()) {
    auto e = zoo_get(id);
    auto r = certify(e.spec, e.default_theorem, std::nullopt, true);
    CHECK_MESSAGE(r.pass, id);
  }
}

TEST_CASE("mixed entry satisfies the average-floor threshold") {
  auto e = nicholson_mixed_system();
  const double lhs = e.expected.at("birth_integral").value;
  const double rhs = e.expected.at("average_floor_threshold").value;
  CHECK(lhs > rhs);
  CHECK(e.spec.birth[0].terms[0].beta.period_integral() ==
        doctest::Approx(lhs).epsilon(1e-14));
}

TEST_CASE("distributed floor matches the two code paths") {
  auto e = nicholson_distributed_system();
  auto floor_fn = derived_rate_floor(e.spec.birth[0]);
  const auto& term = e.spec.birth[0].terms[0];
  for (double t : {0.0, 1.1, 3.0, 5.9}) {
    // beta(t) * integral of gamma over the trailing window, gamma == 1
    const double expect = term.beta.eval(t) * term.tau.eval(t);
    CHECK(floor_fn(t) == doctest::Approx(expect).epsilon(1e-12));
  }
}
