#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdde/criteria.hpp"
#include "pdde/system.hpp"

namespace pdde {

struct Expected {
  double value = 0.0;
  double tol = 0.0;
  std::string source; // "closed form", "reported", "computed"
};

/// A built-in worked instance: the system, the named quantities it must
/// reproduce, and the certification route it is expected to pass.
struct ZooEntry {
  std::string id;
  SystemSpec spec;
  std::map<std::string, Expected> expected;
  std::optional<EnvelopePair> canonical_envelopes; // reference data for tests
  TheoremId default_theorem = TheoremId::T3_2_sublinear;
  std::string note;
};

ZooEntry scalar_nicholson_example();
/// Two symmetric patches with constant coefficients and one linear impulse
/// per component per period at omega/2; eta == 0 drops the schedule.
ZooEntry planar_autonomous_example(double omega, double eta1, double eta2);
ZooEntry hematopoiesis_system();
ZooEntry nicholson_distributed_system();
ZooEntry nicholson_mixed_system();
ZooEntry mackey_glass_system();

std::vector<std::string> zoo_ids();
ZooEntry zoo_get(const std::string& id);

} // namespace pdde
