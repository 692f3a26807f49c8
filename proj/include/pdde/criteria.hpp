#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdde/impulse_algebra.hpp"
#include "pdde/nonlinearity.hpp"
#include "pdde/system.hpp"

namespace pdde {

/// Identifiers of the certifiable existence criteria exposed by the CLI.
enum class TheoremId {
  T3_1,             // envelope comparison, unscaled
  T3_2_sublinear,   // envelope comparison with scaling vector, sublinear roles
  T3_2_superlinear, // mirrored envelope roles
  T3_3_pointwise,   // pointwise coefficient comparison
  T3_3_average,     // period-average coefficient comparison
  C3_1_nonimpulsive,// pointwise/average forms specialized to empty schedules
  C_scalar,         // scalar specialization (impulses allowed)
  T3_6_limits,      // limit-profile comparison, both growth regimes
  T3_4_bounded,     // bounded-birth criteria with derived rate floor
  C3_4_gamma,       // rate/dominance ratio test, nonimpulsive
  T4_1_hematopoiesis, // coupling-only smallness test
  T_N1_nicholson,   // bounded-birth criteria with the blowflies floor
  T4_4_mixed,       // mixed-monotonicity criteria (a)/(b)/(c)
  T4_2_planar,      // two-component ratio criterion
};

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& s);

struct Inequality {
  std::string name;
  double value = 0.0;   // evaluated left-hand quantity
  double bound = 0.0;   // comparison bound
  std::string sense;    // "<=", ">=", "<", ">"
  double margin = 0.0;  // positive when satisfied with slack
  bool pass = false;
};

struct SweepEntry {
  double eps = 0.0;
  bool pass = false;
  double margin = 0.0;
};

struct CriterionReport {
  TheoremId theorem = TheoremId::T3_2_sublinear;
  bool pass = false;
  double margin = 0.0; // smallest slack over the governing inequalities
  std::vector<double> v;
  int grid_panels = 0;
  std::vector<Inequality> inequalities;
  std::vector<SweepEntry> sweep;  // envelope parameter sweep, when applicable
  double chosen_eps = 0.0;        // 0 when no sweep ran
  std::string note;
};

struct CheckOptions {
  int panels = 512;
};

/// \int_t^{t+omega} e^{D_i(s) - D_i(t)} w(s) ds by composite Simpson on
/// breakpoint-aligned panels, decay integrals taken in closed form.
double kernel_integral(const SystemSpec& spec, int i, double t,
                       const std::function<double(double)>& w, int panels = 512);

CriterionReport check_sublinear(const SystemSpec& spec, const EnvelopePair& env,
                                const std::vector<double>& v,
                                CheckOptions opts = {});
CriterionReport check_superlinear(const SystemSpec& spec, const EnvelopePair& env,
                                  const std::vector<double>& v,
                                  CheckOptions opts = {});
CriterionReport check_pointwise(const SystemSpec& spec, const EnvelopePair& env,
                                const std::vector<double>& v,
                                CheckOptions opts = {});
CriterionReport check_average(const SystemSpec& spec, const EnvelopePair& env,
                              const std::vector<double>& v,
                              CheckOptions opts = {});
CriterionReport check_limit_profile(const SystemSpec& spec, const LimitProfile& lp,
                                    const std::vector<double>& v,
                                    CheckOptions opts = {});
CriterionReport check_bounded_nonlinearity(const SystemSpec& spec,
                                           const std::vector<double>& v,
                                           CheckOptions opts = {});
CriterionReport check_coupling_only(const SystemSpec& spec,
                                    const std::vector<double>& v,
                                    CheckOptions opts = {});
CriterionReport check_gamma_ratio(const SystemSpec& spec,
                                  const std::vector<double>& v,
                                  CheckOptions opts = {});
CriterionReport check_mixed_monotonicity(const SystemSpec& spec,
                                         const std::vector<double>& v,
                                         CheckOptions opts = {});
CriterionReport check_planar(const SystemSpec& spec, const std::vector<double>& v,
                             CheckOptions opts = {});

/// Limit profile derived analytically for point-delay birth kinds; throws
/// for kinds whose limits are not computable from the descriptor.
LimitProfile derive_limit_profile(const SystemSpec& spec);

/// Scaling-vector search: first component pinned to 1, remaining components
/// scanned over a logarithmic grid 1e-3..1e3 (21 points per axis), then one
/// factor-2 refinement window (21 points) around the best candidate. Returns
/// the passing vector of maximal margin, or nothing.
std::optional<std::vector<double>> search_v(
    const SystemSpec& spec,
    const std::function<CriterionReport(const std::vector<double>&)>& checker);

/// Dispatch by theorem id. When `v` is absent and `search` is set, runs
/// search_v; otherwise uses the unit vector.
CriterionReport certify(const SystemSpec& spec, TheoremId id,
                        std::optional<std::vector<double>> v, bool search,
                        CheckOptions opts = {});

/// Default certification route for a spec's birth kinds (used by the
/// pipeline).
TheoremId auto_theorem(const SystemSpec& spec);

} // namespace pdde
