#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vendor_json.hpp"

#include "pdde/criteria.hpp"
#include "pdde/phi_operator.hpp"
#include "pdde/simulator.hpp"

namespace pdde {

json report_to_json(const CriterionReport& r);
json bounds_to_json(const std::vector<ComponentBounds>& b);
json solve_to_json(const FixedPointResult& r);

struct PipelineOptions {
  int panels = 512;
  double tol = 1e-8;
  int max_iter = 2000;
  double sim_step = 0.0;
};

struct PipelineResult {
  std::string verdict; // "certified+computed", "certified only", "not certified"
  json stages;
};

/// bounds -> auto-selected criterion (scaling-vector search when n > 1) ->
/// operator iteration -> round-trip through the integrator.
PipelineResult pipeline(const SystemSpec& spec, PipelineOptions opts = {});

namespace cli {

/// Entry point behind the binary; argv-style arguments without the program
/// name. Exit status: 0 pass/converged, 1 certified-fail/unconverged,
/// 2 input or hypothesis error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace cli

} // namespace pdde
