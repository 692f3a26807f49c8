#include "pdde/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace pdde {

namespace {

constexpr double kEqBand = 1e-9;      // equalities to the bound are accepted
constexpr double kStrictTol = 1e-12;  // strict inequalities need this much slack
constexpr double kWitnessTol = 1e-9;  // strictness witness for <=-not-identical
const double kEpsSweep[] = {0.2, 0.1, 0.05, 0.01, 0.001};

std::string idx(int i) { return "[" + std::to_string(i + 1) + "]"; }

Inequality ineq(std::string name, double value, double bound, std::string sense) {
  Inequality q;
  q.name = std::move(name);
  q.value = value;
  q.bound = bound;
  q.sense = sense;
  q.margin = (sense == "<=" || sense == "<") ? bound - value : value - bound;
  q.pass = (sense == "<" || sense == ">") ? q.margin > kStrictTol
                                          : q.margin >= -kEqBand;
  return q;
}

void fold(CriterionReport& r, const Inequality& q) {
  r.inequalities.push_back(q);
  r.margin = std::min(r.margin, q.margin);
  r.pass = r.pass && q.pass;
}

// ---------------------------------------------------------------------------
// Shared sampling of a spec over a breakpoint-aligned panel grid.

struct EvalGrid {
  const SystemSpec* spec = nullptr;
  std::vector<double> nodes, mids;
  std::vector<std::vector<double>> eD_nodes, eD_mids; // e^{D_i(t)}
  std::vector<double> Kfull;                          // e^{D_i(omega)}

  EvalGrid(const SystemSpec& s, int panels) : spec(&s) {
    nodes = GridFunction::make_grid(s.omega, s.impulses.instants, panels);
    mids.resize(nodes.size() - 1);
    for (std::size_t p = 0; p + 1 < nodes.size(); ++p)
      mids[p] = 0.5 * (nodes[p] + nodes[p + 1]);
    eD_nodes.resize(std::size_t(s.n));
    eD_mids.resize(std::size_t(s.n));
    Kfull.resize(std::size_t(s.n));
    for (int i = 0; i < s.n; ++i) {
      auto& en = eD_nodes[std::size_t(i)];
      auto& em = eD_mids[std::size_t(i)];
      en.resize(nodes.size());
      em.resize(mids.size());
      for (std::size_t m = 0; m < nodes.size(); ++m)
        en[m] = std::exp(decay_integral(s, i, nodes[m]));
      for (std::size_t m = 0; m < mids.size(); ++m)
        em[m] = std::exp(decay_integral(s, i, mids[m]));
      Kfull[std::size_t(i)] = std::exp(decay_integral(s, i, s.omega));
    }
  }

  int panels_count() const { return int(nodes.size()) - 1; }

  double integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < nodes.size(); ++p) {
      const double h = nodes[p + 1] - nodes[p];
      acc += h / 6.0 * (f(nodes[p]) + 4.0 * f(mids[p]) + f(nodes[p + 1]));
    }
    return acc;
  }
};

// min (or max) of a smooth periodic callable: node scan plus one local pass
std::pair<double, double> periodic_extremum(const EvalGrid& g,
                                            const std::function<double(double)>& f,
                                            bool maximize) {
  double best = maximize ? -1e300 : 1e300;
  double argt = 0.0;
  std::size_t best_m = 0;
  for (std::size_t m = 0; m + 1 < g.nodes.size(); ++m) { // node omega == node 0
    const double v = f(g.nodes[m]);
    if (maximize ? v > best : v < best) {
      best = v;
      argt = g.nodes[m];
      best_m = m;
    }
  }
  const double omega = g.spec->omega;
  const std::size_t M = g.nodes.size() - 1;
  const double lo = (best_m == 0) ? g.nodes[M - 1] - omega : g.nodes[best_m - 1];
  const double hi = g.nodes[best_m + 1];
  for (int k = 0; k <= 32; ++k) {
    double t = lo + (hi - lo) * k / 32.0;
    double r = t - omega * std::floor(t / omega);
    const double v = f(r);
    if (maximize ? v > best : v < best) {
      best = v;
      argt = r;
    }
  }
  return {best, argt};
}

// ---------------------------------------------------------------------------
// Kernel field F(t) = \int_t^{t+omega} e^{D_i(s)-D_i(t)} w(s) ds, realised
// through the cumulative C(t) = \int_0^t e^{D_i(s)} w(s) ds and the one-period
// wraparound F(t) = (C(omega) + (K - 1) C(t)) e^{-D_i(t)}, K = e^{D_i(omega)}.

struct KernelField {
  const EvalGrid* g = nullptr;
  int i = 0;
  std::function<double(double)> w;
  std::vector<double> C;

  double F_node(std::size_t m) const {
    return (C.back() + (g->Kfull[std::size_t(i)] - 1.0) * C[m]) /
           g->eD_nodes[std::size_t(i)][m];
  }

  double F_at(double t) const {
    const double omega = g->spec->omega;
    double r = t - omega * std::floor(t / omega);
    if (r < 0.0) r += omega;
    auto it = std::upper_bound(g->nodes.begin(), g->nodes.end(), r);
    std::size_t p = (it == g->nodes.begin()) ? 0 : std::size_t(it - g->nodes.begin()) - 1;
    if (p >= g->nodes.size() - 1) p = g->nodes.size() - 2;
    auto f = [&](double s) {
      return std::exp(decay_integral(*g->spec, i, s)) * w(s);
    };
    const double a = g->nodes[p];
    const double Ct =
        C[p] + (r - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + r)) + f(r));
    return (C.back() + (g->Kfull[std::size_t(i)] - 1.0) * Ct) *
           std::exp(-decay_integral(*g->spec, i, r));
  }

  std::pair<double, double> extremum(bool maximize) const {
    double best = maximize ? -1e300 : 1e300;
    std::size_t best_m = 0;
    for (std::size_t m = 0; m + 1 < g->nodes.size(); ++m) {
      const double v = F_node(m);
      if (maximize ? v > best : v < best) {
        best = v;
        best_m = m;
      }
    }
    double argt = g->nodes[best_m];
    const double omega = g->spec->omega;
    const std::size_t M = g->nodes.size() - 1;
    const double lo = (best_m == 0) ? g->nodes[M - 1] - omega : g->nodes[best_m - 1];
    const double hi = g->nodes[best_m + 1];
    for (int k = 0; k <= 32; ++k) {
      double t = lo + (hi - lo) * k / 32.0;
      double r = t - omega * std::floor(t / omega);
      const double v = F_at(r);
      if (maximize ? v > best : v < best) {
        best = v;
        argt = r;
      }
    }
    return {best, argt};
  }
};

KernelField make_kernel_field(const EvalGrid& g, int i,
                              std::function<double(double)> w) {
  KernelField k;
  k.g = &g;
  k.i = i;
  k.w = std::move(w);
  k.C.assign(g.nodes.size(), 0.0);
  const auto& en = g.eD_nodes[std::size_t(i)];
  const auto& em = g.eD_mids[std::size_t(i)];
  for (std::size_t p = 0; p + 1 < g.nodes.size(); ++p) {
    const double h = g.nodes[p + 1] - g.nodes[p];
    k.C[p + 1] = k.C[p] + h / 6.0 *
                              (en[p] * k.w(g.nodes[p]) +
                               4.0 * em[p] * k.w(g.mids[p]) +
                               en[p + 1] * k.w(g.nodes[p + 1]));
  }
  return k;
}

// ---------------------------------------------------------------------------
// Weights: scalar comparison functions with a period integral attached.

struct Weight {
  std::function<double(double)> f;
  double integral = 0.0; // over one period
};

Weight weight_of(const PeriodicFn& p) {
  return {[p](double t) { return p.eval(t); }, p.period_integral()};
}

Weight weight_const(double omega, double c) {
  return {[c](double) { return c; }, c * omega};
}

Weight weight_scaled(const EvalGrid& g, std::function<double(double)> f,
                     double factor) {
  Weight w;
  w.f = [f, factor](double t) { return factor * f(t); };
  w.integral = factor * g.integrate(f);
  return w;
}

struct WeightSet {
  std::vector<Weight> b1, b2; // one per component
};

WeightSet weights_of(const EnvelopePair& env) {
  WeightSet ws;
  for (const auto& f : env.b1) ws.b1.push_back(weight_of(f));
  for (const auto& f : env.b2) ws.b2.push_back(weight_of(f));
  return ws;
}

// coupling pulled toward component i and rescaled by the vector ratios
std::function<double(double)> coupling_sum(const SystemSpec& spec, int i,
                                           const std::vector<double>& v) {
  std::vector<std::pair<double, PeriodicFn>> rows;
  for (int j = 0; j < spec.n; ++j)
    if (j != i)
      rows.emplace_back(v[std::size_t(j)] / v[std::size_t(i)],
                        spec.coupling[std::size_t(i)][std::size_t(j)]);
  return [rows](double t) {
    double s = 0.0;
    for (const auto& [r, a] : rows) s += r * a.eval(t);
    return s;
  };
}

double coupling_integral(const SystemSpec& spec, int i,
                         const std::vector<double>& v) {
  double s = 0.0;
  for (int j = 0; j < spec.n; ++j)
    if (j != i)
      s += v[std::size_t(j)] / v[std::size_t(i)] *
           spec.coupling[std::size_t(i)][std::size_t(j)].period_integral();
  return s;
}

void require_v(const SystemSpec& spec, const std::vector<double>& v) {
  if (v.size() != std::size_t(spec.n))
    throw ModelError("model", "scaling vector dimension mismatch");
  for (double x : v)
    if (!(x > 0.0)) throw ModelError("model", "scaling vector must be positive");
}

CriterionReport fresh(TheoremId id, const std::vector<double>& v, int panels) {
  CriterionReport r;
  r.theorem = id;
  r.pass = true;
  r.margin = std::numeric_limits<double>::infinity();
  r.v = v;
  r.grid_panels = panels;
  return r;
}

// <=-not-identical over the grid: lhs(t) <= rhs(t) everywhere within 1e-12,
// strictly by more than 1e-9 somewhere.
void fold_le_not_identical(CriterionReport& r, const EvalGrid& g, std::string name,
                           const std::function<double(double)>& lhs,
                           const std::function<double(double)>& rhs) {
  auto gap = [&](double t) { return rhs(t) - lhs(t); };
  auto [worst, targ] = periodic_extremum(g, gap, false);
  auto [bestgap, _] = periodic_extremum(g, gap, true);
  Inequality everywhere = ineq(name + " (everywhere)", -worst, 0.0, "<=");
  everywhere.pass = worst >= -kStrictTol;
  everywhere.margin = worst;
  (void)targ;
  Inequality witness = ineq(name + " (strict somewhere)", bestgap, kWitnessTol, ">");
  witness.pass = bestgap > kWitnessTol;
  witness.margin = bestgap - kWitnessTol;
  fold(r, everywhere);
  fold(r, witness);
}

// ---------------------------------------------------------------------------
// Envelope comparison core (amplitude-scaled gain at zero / infinity).

CriterionReport envelope_core(const SystemSpec& spec, const EvalGrid& g,
                              const std::vector<ComponentBounds>& bounds,
                              const std::vector<double>& v, const WeightSet& ws,
                              bool sublinear, TheoremId label) {
  CriterionReport r = fresh(label, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    auto coup = coupling_sum(spec, i, v);
    auto w1 = [&, coup](double t) { return coup(t) + ws.b1[std::size_t(i)].f(t); };
    auto w2 = [&, coup](double t) { return coup(t) + ws.b2[std::size_t(i)].f(t); };
    KernelField k1 = make_kernel_field(g, i, w1);
    KernelField k2 = make_kernel_field(g, i, w2);
    if (sublinear) {
      const double c0 = b.gain_min * b.window_min * k1.extremum(false).first;
      const double Ci = b.gain_max * b.window_max * k2.extremum(true).first;
      fold(r, ineq("gain_at_zero" + idx(i), c0, 1.0, ">="));
      fold(r, ineq("gain_at_infinity" + idx(i), Ci, 1.0, "<="));
    } else {
      const double C0 = b.gain_max * b.window_max * k1.extremum(true).first;
      const double ci = b.gain_min * b.window_min * k2.extremum(false).first;
      fold(r, ineq("gain_at_zero" + idx(i), C0, 1.0, "<="));
      fold(r, ineq("gain_at_infinity" + idx(i), ci, 1.0, ">="));
    }
  }
  return r;
}

CriterionReport pointwise_core(const SystemSpec& spec, const EvalGrid& g,
                               const std::vector<ComponentBounds>& bounds,
                               const std::vector<double>& v, const WeightSet& ws,
                               TheoremId label) {
  CriterionReport r = fresh(label, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    auto coup = coupling_sum(spec, i, v);
    const auto& d = spec.death[std::size_t(i)];
    auto upper = [&, coup](double t) {
      return d.eval(t) - b.pw_mult_max * (ws.b2[std::size_t(i)].f(t) + coup(t));
    };
    auto lower = [&, coup](double t) {
      return b.pw_mult_min * (ws.b1[std::size_t(i)].f(t) + coup(t)) - d.eval(t);
    };
    fold(r, ineq("mortality_dominates_ceiling" + idx(i),
                 periodic_extremum(g, upper, false).first, 0.0, ">="));
    fold(r, ineq("floor_dominates_mortality" + idx(i),
                 periodic_extremum(g, lower, false).first, 0.0, ">="));
  }
  return r;
}

CriterionReport average_core(const SystemSpec& spec, const EvalGrid& g,
                             const std::vector<ComponentBounds>& bounds,
                             const std::vector<double>& v, const WeightSet& ws,
                             TheoremId label) {
  CriterionReport r = fresh(label, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    const double ai = coupling_integral(spec, i, v);
    const double hi = b.avg_mult_max * (ws.b2[std::size_t(i)].integral + ai);
    const double lo = b.avg_mult_min * (ws.b1[std::size_t(i)].integral + ai);
    fold(r, ineq("average_ceiling" + idx(i), hi, 1.0, "<="));
    fold(r, ineq("average_floor" + idx(i), lo, 1.0, ">="));
  }
  return r;
}

// per-component rate floors used by the bounded-birth criteria; hematopoiesis
// components have no finite floor requirement and are marked absent
struct RateFloors {
  std::vector<std::function<double(double)>> f; // empty fn when absent
  std::vector<double> integral;
};

RateFloors rate_floors(const SystemSpec& spec, const EvalGrid& g,
                       const std::vector<ComponentBounds>& bounds) {
  RateFloors rf;
  rf.f.resize(std::size_t(spec.n));
  rf.integral.assign(std::size_t(spec.n), 0.0);
  for (int i = 0; i < spec.n; ++i) {
    const auto& d = spec.birth[std::size_t(i)];
    switch (d.kind) {
      case NonlinKind::hematopoiesis_discrete:
      case NonlinKind::hematopoiesis_distributed:
        break; // unbounded floor near zero; only the coupling part binds
      case NonlinKind::nicholson_mixed: {
        const double sigma = bounds[std::size_t(i)].cone_sigma;
        auto base = derived_rate_floor(d);
        rf.f[std::size_t(i)] = [base, sigma](double t) { return sigma * base(t); };
        double exact = 0.0;
        for (const auto& term : d.terms) exact += term.beta.period_integral();
        rf.integral[std::size_t(i)] = sigma * exact;
        break;
      }
      default: {
        rf.f[std::size_t(i)] = derived_rate_floor(d);
        rf.integral[std::size_t(i)] = g.integrate(rf.f[std::size_t(i)]);
        break;
      }
    }
  }
  return rf;
}

} // namespace

// ---------------------------------------------------------------------------

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T3_1: return "T3_1";
    case TheoremId::T3_2_sublinear: return "T3_2_sublinear";
    case TheoremId::T3_2_superlinear: return "T3_2_superlinear";
    case TheoremId::T3_3_pointwise: return "T3_3_pointwise";
    case TheoremId::T3_3_average: return "T3_3_average";
    case TheoremId::C3_1_nonimpulsive: return "C3_1_nonimpulsive";
    case TheoremId::C_scalar: return "C_scalar";
    case TheoremId::T3_6_limits: return "T3_6_limits";
    case TheoremId::T3_4_bounded: return "T3_4_bounded";
    case TheoremId::C3_4_gamma: return "C3_4_gamma";
    case TheoremId::T4_1_hematopoiesis: return "T4_1_hematopoiesis";
    case TheoremId::T_N1_nicholson: return "T_N1_nicholson";
    case TheoremId::T4_4_mixed: return "T4_4_mixed";
    case TheoremId::T4_2_planar: return "T4_2_planar";
  }
  return "T3_2_sublinear";
}

TheoremId theorem_from_string(const std::string& s) {
  static const std::map<std::string, TheoremId> table = {
      {"T3_1", TheoremId::T3_1},
      {"T3_2_sublinear", TheoremId::T3_2_sublinear},
      {"T3_2_superlinear", TheoremId::T3_2_superlinear},
      {"T3_3_pointwise", TheoremId::T3_3_pointwise},
      {"T3_3_average", TheoremId::T3_3_average},
      {"C3_1_nonimpulsive", TheoremId::C3_1_nonimpulsive},
      {"C_scalar", TheoremId::C_scalar},
      {"T3_6_limits", TheoremId::T3_6_limits},
      {"T3_4_bounded", TheoremId::T3_4_bounded},
      {"C3_4_gamma", TheoremId::C3_4_gamma},
      {"T4_1_hematopoiesis", TheoremId::T4_1_hematopoiesis},
      {"T_N1_nicholson", TheoremId::T_N1_nicholson},
      {"T4_4_mixed", TheoremId::T4_4_mixed},
      {"T4_2_planar", TheoremId::T4_2_planar},
  };
  auto it = table.find(s);
  if (it == table.end())
    throw ModelError("config", "unknown theorem id '" + s + "'");
  return it->second;
}

double kernel_integral(const SystemSpec& spec, int i, double t,
                       const std::function<double(double)>& w, int panels) {
  EvalGrid g(spec, panels);
  KernelField k = make_kernel_field(g, i, w);
  return k.F_at(t);
}

CriterionReport check_sublinear(const SystemSpec& spec, const EnvelopePair& env,
                                const std::vector<double>& v, CheckOptions opts) {
  require_v(spec, v);
  env.validate(spec.n, spec.omega);
  EvalGrid g(spec, opts.panels);
  return envelope_core(spec, g, impulse_bounds(spec), v, weights_of(env), true,
                       TheoremId::T3_2_sublinear);
}

CriterionReport check_superlinear(const SystemSpec& spec, const EnvelopePair& env,
                                  const std::vector<double>& v, CheckOptions opts) {
  require_v(spec, v);
  env.validate(spec.n, spec.omega);
  EvalGrid g(spec, opts.panels);
  return envelope_core(spec, g, impulse_bounds(spec), v, weights_of(env), false,
                       TheoremId::T3_2_superlinear);
}

CriterionReport check_pointwise(const SystemSpec& spec, const EnvelopePair& env,
                                const std::vector<double>& v, CheckOptions opts) {
  require_v(spec, v);
  env.validate(spec.n, spec.omega);
  EvalGrid g(spec, opts.panels);
  return pointwise_core(spec, g, impulse_bounds(spec), v, weights_of(env),
                        TheoremId::T3_3_pointwise);
}

CriterionReport check_average(const SystemSpec& spec, const EnvelopePair& env,
                              const std::vector<double>& v, CheckOptions opts) {
  require_v(spec, v);
  env.validate(spec.n, spec.omega);
  EvalGrid g(spec, opts.panels);
  return average_core(spec, g, impulse_bounds(spec), v, weights_of(env),
                      TheoremId::T3_3_average);
}

CriterionReport check_limit_profile(const SystemSpec& spec, const LimitProfile& lp,
                                    const std::vector<double>& v,
                                    CheckOptions opts) {
  require_v(spec, v);
  lp.validate(spec.n);
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  CriterionReport r = fresh(TheoremId::T3_6_limits, v, g.panels_count());
  r.pass = false;
  r.margin = -std::numeric_limits<double>::infinity();

  auto branch = [&](bool sub) {
    CriterionReport br = fresh(TheoremId::T3_6_limits, v, g.panels_count());
    const std::string tag = sub ? "small_amplitude" : "large_amplitude";
    for (int i = 0; i < spec.n; ++i) {
      const auto& b = bounds[std::size_t(i)];
      const auto& d = spec.death[std::size_t(i)];
      auto coup = coupling_sum(spec, i, v);
      const double hi_lim = sub ? lp.Finf[std::size_t(i)] : lp.F0[std::size_t(i)];
      const double lo_lim = sub ? lp.f0[std::size_t(i)] : lp.finf[std::size_t(i)];
      if (std::isinf(hi_lim)) {
        br.pass = false;
        br.margin = -std::numeric_limits<double>::infinity();
        br.note = tag + ": ceiling limit is infinite for component " +
                  std::to_string(i + 1) + "; branch unsupported";
        return br;
      }
      auto upper = [&, coup](double t) {
        return d.eval(t) - b.pw_mult_max * (hi_lim * d.eval(t) + coup(t));
      };
      fold(br, ineq(tag + "_ceiling" + idx(i),
                    periodic_extremum(g, upper, false).first, 0.0, ">"));
      if (std::isinf(lo_lim)) {
        Inequality q = ineq(tag + "_floor" + idx(i), 1.0, 0.0, ">");
        q.name += " (infinite floor limit, trivially satisfied)";
        fold(br, q);
        continue;
      }
      auto lower = [&, coup](double t) {
        return b.pw_mult_min * (lo_lim * d.eval(t) + coup(t)) - d.eval(t);
      };
      fold(br, ineq(tag + "_floor" + idx(i),
                    periodic_extremum(g, lower, false).first, 0.0, ">"));
    }
    return br;
  };

  CriterionReport sub = branch(true);
  CriterionReport sup = branch(false);
  for (auto& q : sub.inequalities) r.inequalities.push_back(q);
  for (auto& q : sup.inequalities) r.inequalities.push_back(q);
  r.pass = sub.pass || sup.pass;
  r.margin = std::max(sub.margin, sup.margin);
  r.note = sub.pass   ? "small-amplitude growth branch holds"
           : sup.pass ? "large-amplitude growth branch holds"
                      : "neither growth branch holds";
  if (!sub.note.empty()) r.note += "; " + sub.note;
  if (!sup.note.empty() && !sup.pass) r.note += "; " + sup.note;
  return r;
}

CriterionReport check_bounded_nonlinearity(const SystemSpec& spec,
                                           const std::vector<double>& v,
                                           CheckOptions opts) {
  require_v(spec, v);
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  auto rf = rate_floors(spec, g, bounds);
  CriterionReport r = fresh(TheoremId::T3_4_bounded, v, g.panels_count());

  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    auto coup = coupling_sum(spec, i, v);
    KernelField ka = make_kernel_field(g, i, coup);
    const double shrink =
        b.gain_max * b.window_max * ka.extremum(true).first;
    fold(r, ineq("coupling_shrinks" + idx(i), shrink, 1.0, "<"));
    if (!rf.f[std::size_t(i)]) {
      r.note += (r.note.empty() ? "" : "; ");
      r.note += "component " + std::to_string(i + 1) +
                " has unbounded floor near zero; floor condition waived";
      continue;
    }
    auto floor_fn = rf.f[std::size_t(i)];
    auto wb = [coup, floor_fn](double t) { return coup(t) + floor_fn(t); };
    KernelField kb = make_kernel_field(g, i, wb);
    const double grow = b.gain_min * b.window_min * kb.extremum(false).first;
    fold(r, ineq("floor_expands" + idx(i), grow, 1.0, ">"));
  }

  // auxiliary pointwise and average forms (sufficient conditions)
  CriterionReport aux = fresh(r.theorem, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    const auto& d = spec.death[std::size_t(i)];
    auto coup = coupling_sum(spec, i, v);
    if (!rf.f[std::size_t(i)]) continue;
    auto floor_fn = rf.f[std::size_t(i)];
    fold_le_not_identical(
        aux, g, "aux_pointwise_ceiling" + idx(i),
        [&, coup](double t) { return b.pw_mult_max * coup(t); },
        [&](double t) { return d.eval(t); });
    fold_le_not_identical(
        aux, g, "aux_pointwise_floor" + idx(i),
        [&](double t) { return d.eval(t); },
        [&, coup, floor_fn](double t) {
          return b.pw_mult_min * (floor_fn(t) + coup(t));
        });
    const double ai = coupling_integral(spec, i, v);
    fold(aux, ineq("aux_average_ceiling" + idx(i), b.avg_mult_max * ai, 1.0, "<="));
    fold(aux, ineq("aux_average_floor" + idx(i),
                   b.avg_mult_min * (rf.integral[std::size_t(i)] + ai), 1.0, ">="));
  }
  for (auto& q : aux.inequalities) r.inequalities.push_back(q);
  return r;
}

CriterionReport check_coupling_only(const SystemSpec& spec,
                                    const std::vector<double>& v,
                                    CheckOptions opts) {
  require_v(spec, v);
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  CriterionReport r = fresh(TheoremId::T4_1_hematopoiesis, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& b = bounds[std::size_t(i)];
    KernelField ka = make_kernel_field(g, i, coupling_sum(spec, i, v));
    const double shrink = b.gain_max * b.window_max * ka.extremum(true).first;
    fold(r, ineq("coupling_shrinks" + idx(i), shrink, 1.0, "<"));
  }
  return r;
}

CriterionReport check_gamma_ratio(const SystemSpec& spec,
                                  const std::vector<double>& v,
                                  CheckOptions opts) {
  require_v(spec, v);
  if (!spec.impulses.empty())
    throw ModelError("precondition", "ratio test applies to empty schedules only");
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  auto rf = rate_floors(spec, g, bounds);
  CriterionReport r = fresh(TheoremId::C3_4_gamma, v, g.panels_count());

  CriterionReport a = fresh(r.theorem, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    if (!rf.f[std::size_t(i)])
      throw ModelError("precondition",
                       "ratio test needs a finite rate floor for component " +
                           std::to_string(i + 1));
    auto coup = coupling_sum(spec, i, v);
    const auto& d = spec.death[std::size_t(i)];
    auto denom = [&, coup](double t) { return d.eval(t) - coup(t); };
    auto [dmin, at] = periodic_extremum(g, denom, false);
    if (!(dmin > 0.0)) {
      std::ostringstream os;
      os << "dominance denominator nonpositive at t=" << at << " for component "
         << i + 1;
      throw ModelError("precondition", os.str());
    }
    auto floor_fn = rf.f[std::size_t(i)];
    fold_le_not_identical(a, g, "rate_ratio" + idx(i), denom,
                          [floor_fn](double t) { return floor_fn(t); });
  }

  CriterionReport b = fresh(r.theorem, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& bb = bounds[std::size_t(i)];
    const double eD = std::exp(bb.decay_period);
    const double ai = coupling_integral(spec, i, v);
    fold(b, ineq("avg_coupling_bound" + idx(i), eD * ai, eD - 1.0, "<="));
    fold(b, ineq("avg_floor_bound" + idx(i), rf.integral[std::size_t(i)] + ai,
                 eD - 1.0, ">="));
  }

  for (auto& q : a.inequalities) r.inequalities.push_back(q);
  for (auto& q : b.inequalities) r.inequalities.push_back(q);
  r.pass = a.pass || b.pass;
  r.margin = std::max(a.margin, b.margin);
  r.note = a.pass ? "pointwise ratio branch holds"
                  : (b.pass ? "average branch holds" : "neither branch holds");
  return r;
}

CriterionReport check_mixed_monotonicity(const SystemSpec& spec,
                                         const std::vector<double>& v,
                                         CheckOptions opts) {
  require_v(spec, v);
  for (const auto& d : spec.birth)
    if (d.kind != NonlinKind::nicholson_mixed)
      throw ModelError("precondition",
                       "mixed-monotonicity criteria need the mixed birth kind");
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  auto rf = rate_floors(spec, g, bounds); // already carries the cone factor
  CriterionReport r = fresh(TheoremId::T4_4_mixed, v, g.panels_count());

  CriterionReport a = fresh(r.theorem, v, g.panels_count());
  CriterionReport b = fresh(r.theorem, v, g.panels_count());
  CriterionReport c = fresh(r.theorem, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    const auto& bb = bounds[std::size_t(i)];
    const auto& d = spec.death[std::size_t(i)];
    auto coup = coupling_sum(spec, i, v);
    auto floor_fn = rf.f[std::size_t(i)];

    KernelField ka = make_kernel_field(g, i, coup);
    fold(a, ineq("a_coupling_window" + idx(i),
                 bb.gain_max * bb.window_max * ka.extremum(true).first, 1.0, "<="));
    auto wb = [coup, floor_fn](double t) { return coup(t) + floor_fn(t); };
    KernelField kb = make_kernel_field(g, i, wb);
    fold(a, ineq("a_floor_window" + idx(i),
                 bb.gain_min * bb.window_min * kb.extremum(false).first, 1.0, ">="));

    fold_le_not_identical(
        b, g, "b_ceiling" + idx(i),
        [&, coup](double t) { return bb.pw_mult_max * coup(t); },
        [&](double t) { return d.eval(t); });
    fold_le_not_identical(
        b, g, "b_floor" + idx(i), [&](double t) { return d.eval(t); },
        [&, coup, floor_fn](double t) {
          return bb.pw_mult_min * (floor_fn(t) + coup(t));
        });

    const double ai = coupling_integral(spec, i, v);
    fold(c, ineq("c_average_coupling" + idx(i), bb.avg_mult_max * ai, 1.0, "<="));
    fold(c, ineq("c_average_floor" + idx(i),
                 bb.avg_mult_min * (rf.integral[std::size_t(i)] + ai), 1.0, ">="));
  }

  for (auto* br : {&a, &b, &c})
    for (auto& q : br->inequalities) r.inequalities.push_back(q);
  r.pass = a.pass || b.pass || c.pass;
  r.margin = std::max({a.margin, b.margin, c.margin});
  std::string holds;
  if (a.pass) holds += "a";
  if (b.pass) holds += holds.empty() ? "b" : ",b";
  if (c.pass) holds += holds.empty() ? "c" : ",c";
  r.note = holds.empty() ? "none of (a),(b),(c) holds" : "holds: (" + holds + ")";
  return r;
}

CriterionReport check_planar(const SystemSpec& spec, const std::vector<double>& v,
                             CheckOptions opts) {
  require_v(spec, v);
  if (spec.n != 2)
    throw ModelError("precondition", "planar criterion needs dimension 2");
  for (const auto& d : spec.birth)
    if (d.kind != NonlinKind::nicholson_discrete)
      throw ModelError("precondition",
                       "planar criterion covers discrete blowflies birth");
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);
  CriterionReport r = fresh(TheoremId::T4_2_planar, v, g.panels_count());
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const auto& bb = bounds[std::size_t(i)];
    const auto& d = spec.death[std::size_t(i)];
    if (!(d.min_on_period() > 0.0))
      throw ModelError("precondition", "planar criterion needs strictly positive "
                                       "mortality");
    const auto& a = spec.coupling[std::size_t(i)][std::size_t(j)];
    const double ratio = v[std::size_t(j)] / v[std::size_t(i)];
    auto floor_fn = derived_rate_floor(spec.birth[std::size_t(i)]);
    auto up = [&](double t) { return ratio * a.eval(t) / d.eval(t); };
    auto lo = [&](double t) {
      return (floor_fn(t) + ratio * a.eval(t)) / d.eval(t);
    };
    fold(r, ineq("coupling_ratio" + idx(i),
                 bb.pw_mult_max * periodic_extremum(g, up, true).first, 1.0, "<"));
    fold(r, ineq("growth_ratio" + idx(i),
                 bb.pw_mult_min * periodic_extremum(g, lo, false).first, 1.0, ">"));
  }
  return r;
}

LimitProfile derive_limit_profile(const SystemSpec& spec) {
  LimitProfile lp;
  const double inf = std::numeric_limits<double>::infinity();
  EvalGrid g(spec, 512);
  for (int i = 0; i < spec.n; ++i) {
    const auto& d = spec.birth[std::size_t(i)];
    const auto& mort = spec.death[std::size_t(i)];
    if (!(mort.min_on_period() > 0.0))
      throw ModelError("precondition",
                       "limit profile needs strictly positive mortality");
    auto ratio_extrema = [&](const std::function<double(double)>& num) {
      auto f = [&](double t) { return num(t) / mort.eval(t); };
      return std::pair{periodic_extremum(g, f, false).first,
                       periodic_extremum(g, f, true).first};
    };
    switch (d.kind) {
      case NonlinKind::nicholson_discrete: {
        auto beta_sum = derived_rate_floor(d);
        auto [lo, hi] = ratio_extrema(beta_sum);
        lp.f0.push_back(lo);
        lp.F0.push_back(hi);
        lp.finf.push_back(0.0);
        lp.Finf.push_back(0.0);
        break;
      }
      case NonlinKind::hematopoiesis_discrete: {
        lp.f0.push_back(inf);
        lp.F0.push_back(inf);
        lp.finf.push_back(0.0);
        lp.Finf.push_back(0.0);
        break;
      }
      case NonlinKind::custom_table: {
        auto terms = d.terms;
        auto slope_sum = [terms](double t, bool at_zero) {
          double s = 0.0;
          for (const auto& term : terms)
            s += term.beta.eval(t) * (at_zero ? term.table.slope_at_zero()
                                              : term.table.slope_at_infinity());
          return s;
        };
        auto [lo0, hi0] =
            ratio_extrema([slope_sum](double t) { return slope_sum(t, true); });
        auto [loi, hii] =
            ratio_extrema([slope_sum](double t) { return slope_sum(t, false); });
        lp.f0.push_back(lo0);
        lp.F0.push_back(hi0);
        lp.finf.push_back(loi);
        lp.Finf.push_back(hii);
        break;
      }
      default:
        throw ModelError("model", "limit profile not derivable for kind " +
                                      to_string(d.kind) +
                                      "; declare it explicitly");
    }
  }
  return lp;
}

std::optional<std::vector<double>> search_v(
    const SystemSpec& spec,
    const std::function<CriterionReport(const std::vector<double>&)>& checker) {
  const int n = spec.n;
  if (n == 1) {
    auto r = checker({1.0});
    if (r.pass) return std::vector<double>{1.0};
    return std::nullopt;
  }

  struct Best {
    bool pass = false;
    double margin = -std::numeric_limits<double>::infinity();
    std::vector<double> v;
  } best;

  auto consider = [&](const std::vector<double>& v) {
    CriterionReport r;
    try {
      r = checker(v);
    } catch (const ModelError&) {
      return; // candidate hits a precondition; skip it
    }
    const bool better = (r.pass && !best.pass) ||
                        (r.pass == best.pass && r.margin > best.margin);
    if (better) best = {r.pass, r.margin, v};
  };

  // stage 1: 21-point log grid per free axis
  std::vector<int> digit(std::size_t(n - 1), 0);
  const int steps = 21;
  while (true) {
    std::vector<double> v(std::size_t(n), 1.0);
    for (int a = 0; a < n - 1; ++a)
      v[std::size_t(a) + 1] = std::pow(10.0, -3.0 + 0.3 * digit[std::size_t(a)]);
    consider(v);
    int a = 0;
    while (a < n - 1 && ++digit[std::size_t(a)] == steps) {
      digit[std::size_t(a)] = 0;
      ++a;
    }
    if (a == n - 1) break;
  }
  if (best.v.empty()) return std::nullopt;

  // stage 2: factor-2 window around the best candidate
  const std::vector<double> center = best.v;
  std::fill(digit.begin(), digit.end(), 0);
  while (true) {
    std::vector<double> v(std::size_t(n), 1.0);
    for (int a = 0; a < n - 1; ++a) {
      const double base = center[std::size_t(a) + 1];
      const double e = -1.0 + 2.0 * digit[std::size_t(a)] / double(steps - 1);
      v[std::size_t(a) + 1] = base * std::pow(2.0, e);
    }
    consider(v);
    int a = 0;
    while (a < n - 1 && ++digit[std::size_t(a)] == steps) {
      digit[std::size_t(a)] = 0;
      ++a;
    }
    if (a == n - 1) break;
  }

  if (best.pass) return best.v;
  return std::nullopt;
}

namespace {

// envelope construction for the parameter sweep; throws when a kind carries
// no canonical envelope family
WeightSet sweep_weights(const SystemSpec& spec, const EvalGrid& g,
                        const std::vector<ComponentBounds>& bounds, double eps) {
  WeightSet ws;
  for (int i = 0; i < spec.n; ++i) {
    const auto& d = spec.birth[std::size_t(i)];
    switch (d.kind) {
      case NonlinKind::hematopoiesis_discrete:
      case NonlinKind::hematopoiesis_distributed:
        ws.b1.push_back(weight_const(spec.omega, 1.0 / eps));
        ws.b2.push_back(weight_const(spec.omega, eps));
        break;
      case NonlinKind::nicholson_mixed: {
        const double sigma = bounds[std::size_t(i)].cone_sigma;
        auto base = derived_rate_floor(d);
        ws.b1.push_back(weight_scaled(g, base, (1.0 - eps) * sigma));
        ws.b2.push_back(weight_const(spec.omega, eps));
        break;
      }
      case NonlinKind::nicholson_discrete:
      case NonlinKind::nicholson_distributed:
      case NonlinKind::mackey_glass_distributed: {
        auto base = derived_rate_floor(d);
        ws.b1.push_back(weight_scaled(g, base, 1.0 - eps));
        ws.b2.push_back(weight_const(spec.omega, eps));
        break;
      }
      case NonlinKind::custom_table:
        throw ModelError("model", "custom birth kind needs declared envelopes");
    }
  }
  return ws;
}

CriterionReport corollary_scalar(const SystemSpec& spec, const EvalGrid& g,
                                 const std::vector<ComponentBounds>& bounds,
                                 const std::vector<double>& v, const WeightSet& ws) {
  CriterionReport a = pointwise_core(spec, g, bounds, v, ws, TheoremId::C_scalar);
  CriterionReport b = average_core(spec, g, bounds, v, ws, TheoremId::C_scalar);
  CriterionReport r = fresh(TheoremId::C_scalar, v, g.panels_count());
  for (auto& q : a.inequalities) r.inequalities.push_back(q);
  for (auto& q : b.inequalities) r.inequalities.push_back(q);
  r.pass = a.pass || b.pass;
  r.margin = std::max(a.margin, b.margin);
  r.note = a.pass ? "pointwise branch holds"
                  : (b.pass ? "average branch holds" : "neither branch holds");
  return r;
}

CriterionReport corollary_nonimpulsive(const SystemSpec& spec, const EvalGrid& g,
                                       const std::vector<ComponentBounds>& bounds,
                                       const std::vector<double>& v,
                                       const WeightSet& ws) {
  if (!spec.impulses.empty())
    throw ModelError("precondition",
                     "nonimpulsive corollary needs an empty schedule");
  CriterionReport r = fresh(TheoremId::C3_1_nonimpulsive, v, g.panels_count());
  CriterionReport a = fresh(r.theorem, v, g.panels_count());
  CriterionReport b = fresh(r.theorem, v, g.panels_count());
  for (int i = 0; i < spec.n; ++i) {
    auto coup = coupling_sum(spec, i, v);
    const auto& d = spec.death[std::size_t(i)];
    const auto& w1 = ws.b1[std::size_t(i)];
    const auto& w2 = ws.b2[std::size_t(i)];
    auto up = [&, coup](double t) { return d.eval(t) - coup(t) - w2.f(t); };
    auto lo = [&, coup](double t) { return w1.f(t) - (d.eval(t) - coup(t)); };
    fold(a, ineq("direct_ceiling" + idx(i),
                 periodic_extremum(g, up, false).first, 0.0, ">="));
    fold(a, ineq("direct_floor" + idx(i),
                 periodic_extremum(g, lo, false).first, 0.0, ">="));

    const double eD = std::exp(bounds[std::size_t(i)].decay_period);
    const double ai = coupling_integral(spec, i, v);
    fold(b, ineq("direct_avg_ceiling" + idx(i), w2.integral + ai,
                 1.0 - 1.0 / eD, "<="));
    fold(b, ineq("direct_avg_floor" + idx(i), w1.integral + ai, eD - 1.0, ">="));
  }
  for (auto& q : a.inequalities) r.inequalities.push_back(q);
  for (auto& q : b.inequalities) r.inequalities.push_back(q);
  r.pass = a.pass || b.pass;
  r.margin = std::max(a.margin, b.margin);
  r.note = a.pass ? "pointwise branch holds"
                  : (b.pass ? "average branch holds" : "neither branch holds");
  return r;
}

CriterionReport run_envelope_theorem(const SystemSpec& spec, TheoremId id,
                                     const std::vector<double>& v,
                                     CheckOptions opts) {
  EvalGrid g(spec, opts.panels);
  auto bounds = impulse_bounds(spec);

  auto run_with = [&](const WeightSet& ws) -> CriterionReport {
    switch (id) {
      case TheoremId::T3_1: {
        std::vector<double> ones(std::size_t(spec.n), 1.0);
        return envelope_core(spec, g, bounds, ones, ws, true, TheoremId::T3_1);
      }
      case TheoremId::T3_2_sublinear:
        return envelope_core(spec, g, bounds, v, ws, true, id);
      case TheoremId::T3_2_superlinear:
        return envelope_core(spec, g, bounds, v, ws, false, id);
      case TheoremId::T3_3_pointwise:
        return pointwise_core(spec, g, bounds, v, ws, id);
      case TheoremId::T3_3_average:
        return average_core(spec, g, bounds, v, ws, id);
      case TheoremId::C_scalar:
        if (spec.n != 1)
          throw ModelError("precondition", "scalar corollary needs dimension 1");
        return corollary_scalar(spec, g, bounds, v, ws);
      case TheoremId::C3_1_nonimpulsive:
        return corollary_nonimpulsive(spec, g, bounds, v, ws);
      default:
        throw ModelError("model", "not an envelope criterion");
    }
  };

  if (spec.envelopes) return run_with(weights_of(*spec.envelopes));
  if (id == TheoremId::T3_2_superlinear)
    throw ModelError("model",
                     "superlinear criterion needs declared envelopes");

  CriterionReport best;
  bool have = false;
  std::vector<SweepEntry> sweep;
  for (double eps : kEpsSweep) {
    CriterionReport r = run_with(sweep_weights(spec, g, bounds, eps));
    sweep.push_back({eps, r.pass, r.margin});
    const bool better =
        !have || (r.pass && !best.pass) ||
        (r.pass == best.pass && r.margin > best.margin);
    if (better) {
      best = r;
      best.chosen_eps = eps;
      have = true;
    }
  }
  best.sweep = sweep;
  return best;
}

} // namespace

TheoremId auto_theorem(const SystemSpec& spec) {
  bool all_hemato = true, all_mixed = true, all_discrete = true,
       all_bounded = true;
  for (const auto& d : spec.birth) {
    const bool hem = d.kind == NonlinKind::hematopoiesis_discrete ||
                     d.kind == NonlinKind::hematopoiesis_distributed;
    all_hemato &= hem;
    all_mixed &= d.kind == NonlinKind::nicholson_mixed;
    all_discrete &= d.kind == NonlinKind::nicholson_discrete;
    all_bounded &= d.kind != NonlinKind::custom_table;
  }
  if (all_hemato) return TheoremId::T4_1_hematopoiesis;
  if (all_discrete && spec.n == 2) return TheoremId::T4_2_planar;
  if (all_mixed) return TheoremId::T4_4_mixed;
  if (all_bounded) return TheoremId::T3_4_bounded;
  if (spec.envelopes) return TheoremId::T3_2_sublinear;
  throw ModelError("model", "no default criterion for this birth kind; "
                            "declare envelopes");
}

CriterionReport certify(const SystemSpec& spec, TheoremId id,
                        std::optional<std::vector<double>> v, bool search,
                        CheckOptions opts) {
  auto run_at = [&](const std::vector<double>& vv) -> CriterionReport {
    switch (id) {
      case TheoremId::T3_1:
      case TheoremId::T3_2_sublinear:
      case TheoremId::T3_2_superlinear:
      case TheoremId::T3_3_pointwise:
      case TheoremId::T3_3_average:
      case TheoremId::C_scalar:
      case TheoremId::C3_1_nonimpulsive:
        return run_envelope_theorem(spec, id, vv, opts);
      case TheoremId::T3_6_limits: {
        LimitProfile lp = spec.limits ? *spec.limits : derive_limit_profile(spec);
        return check_limit_profile(spec, lp, vv, opts);
      }
      case TheoremId::T3_4_bounded: {
        auto r = check_bounded_nonlinearity(spec, vv, opts);
        r.theorem = id;
        return r;
      }
      case TheoremId::T_N1_nicholson: {
        for (const auto& d : spec.birth)
          if (d.kind != NonlinKind::nicholson_discrete &&
              d.kind != NonlinKind::nicholson_distributed)
            throw ModelError("precondition",
                             "blowflies criterion needs a blowflies birth kind");
        auto r = check_bounded_nonlinearity(spec, vv, opts);
        r.theorem = id;
        return r;
      }
      case TheoremId::C3_4_gamma:
        return check_gamma_ratio(spec, vv, opts);
      case TheoremId::T4_1_hematopoiesis:
        return check_coupling_only(spec, vv, opts);
      case TheoremId::T4_4_mixed:
        return check_mixed_monotonicity(spec, vv, opts);
      case TheoremId::T4_2_planar:
        return check_planar(spec, vv, opts);
    }
    throw ModelError("model", "unhandled theorem id");
  };

  if (v) return run_at(*v);
  if (search && spec.n > 1) {
    auto found = search_v(spec, run_at);
    if (found) return run_at(*found);
    std::vector<double> ones(std::size_t(spec.n), 1.0);
    CriterionReport r = run_at(ones);
    r.pass = false;
    r.note = (r.note.empty() ? "" : r.note + "; ") +
             std::string("no admissible scaling vector found; showing the "
                         "unit vector");
    return r;
  }
  std::vector<double> ones(std::size_t(spec.n), 1.0);
  return run_at(ones);
}

} // namespace pdde
