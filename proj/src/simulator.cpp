#include "pdde/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pdde/nonlinearity.hpp"

namespace pdde {

namespace {

double hermite(const Trajectory::Step& st, int i, double s) {
  const double th = (s - st.t0) / st.h;
  const double t2 = th * th, t3 = t2 * th;
  return st.y0[std::size_t(i)] * (2 * t3 - 3 * t2 + 1) +
         st.h * st.f0[std::size_t(i)] * (t3 - 2 * t2 + th) +
         st.y1[std::size_t(i)] * (-2 * t3 + 3 * t2) +
         st.h * st.f1[std::size_t(i)] * (t3 - t2);
}

} // namespace

double Trajectory::value(int i, double s) const {
  if (s <= t_start || steps.empty()) return history.eval(i, s);
  // locate the step containing s; ends are left-continuous
  std::size_t lo = 0, hi = steps.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (steps[mid].t0 + steps[mid].h < s)
      lo = mid + 1;
    else
      hi = mid;
  }
  const auto& st = steps[lo];
  if (s >= st.t0 + st.h) return st.y1[std::size_t(i)];
  if (s <= st.t0 && lo == 0) return history.eval(i, s);
  return hermite(st, i, s);
}

double Trajectory::value_right(int i, double s) const {
  if (s <= t_start || steps.empty()) return history.eval_right(i, s);
  std::size_t lo = 0, hi = steps.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (steps[mid].t0 + steps[mid].h <= s)
      lo = mid + 1;
    else
      hi = mid;
  }
  const auto& st = steps[lo];
  if (std::abs(s - st.t0) <= 1e-13 * (st.t0 + 1.0)) return st.y0[std::size_t(i)];
  if (s >= st.t0 + st.h) return st.y1[std::size_t(i)];
  return hermite(st, i, s);
}

std::vector<double> Trajectory::state(double s) const {
  std::vector<double> v;
  const int n = history.n();
  v.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) v.push_back(value(i, s));
  return v;
}

namespace {

// Absolute times of breakpoints in (0, t_end]: impulse instants, plus
// constant-delay images of the junction and impulse instants up to depth 2.
std::vector<double> breakpoints(const SystemSpec& spec, double t_end) {
  std::set<double> base{0.0};
  for (double tk : spec.impulses.instants)
    for (double t = tk; t <= t_end + 1e-12; t += spec.omega)
      if (t > 0.0) base.insert(t);

  std::vector<double> const_delays;
  for (const auto& g : spec.birth)
    for (const auto& term : g.terms) {
      if (term.tau.is_constant() && term.tau.mean() > 0.0)
        const_delays.push_back(term.tau.mean());
      if (g.kind == NonlinKind::nicholson_mixed && term.theta.is_constant() &&
          term.theta.mean() > 0.0)
        const_delays.push_back(term.theta.mean());
    }

  std::set<double> all(base);
  std::set<double> depth1;
  for (double b : base)
    for (double tau : const_delays)
      if (b + tau <= t_end) depth1.insert(b + tau);
  for (double b : depth1) {
    all.insert(b);
    for (double tau : const_delays)
      if (b + tau <= t_end) all.insert(b + tau);
  }

  std::vector<double> out;
  double prev = -1.0;
  for (double t : all) {
    if (t <= 0.0 || t > t_end + 1e-12) continue;
    if (t - prev > 1e-10) out.push_back(t);
    prev = t;
  }
  if (out.empty() || std::abs(out.back() - t_end) > 1e-10) out.push_back(t_end);
  else out.back() = t_end;
  return out;
}

struct Reader {
  const Trajectory* traj;
  double t_done;                                // end of completed dense output
  const std::vector<double>* y_base = nullptr;  // state at t_done
  const std::vector<double>* f_base = nullptr;  // slope at t_done

  double value(int i, double s) const {
    if (s <= t_done || y_base == nullptr) return traj->value(i, s);
    // short extrapolated tail inside the current step
    const double slope = f_base ? (*f_base)[std::size_t(i)] : 0.0;
    return (*y_base)[std::size_t(i)] + (s - t_done) * slope;
  }

  // post-jump value; only differs from value() exactly at impulse instants
  double value_from_right(int i, double s) const {
    if (s <= t_done || y_base == nullptr) return traj->value_right(i, s);
    const double slope = f_base ? (*f_base)[std::size_t(i)] : 0.0;
    return (*y_base)[std::size_t(i)] + (s - t_done) * slope;
  }
};

// composite Simpson of the term inner integrand over [a, b], split at the
// impulse instants where the state jumps
double inner_integral(const SystemSpec& spec, const Reader& rd, int i,
                      NonlinKind kind, const NonlinTerm& term, double a, double b,
                      double hq) {
  if (b <= a) return 0.0;
  std::vector<double> cuts{a};
  for (double tk : spec.impulses.instants) {
    const double first = tk + spec.omega * std::ceil((a - tk) / spec.omega);
    for (double t = first; t < b; t += spec.omega)
      if (t > a + 1e-13) cuts.push_back(t);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    const int m = std::max(1, int(std::ceil((hi - lo) / hq)));
    const double h = (hi - lo) / m;
    for (int p = 0; p < m; ++p) {
      const double s0 = lo + p * h, s1 = s0 + h, sm = s0 + 0.5 * h;
      // at a cut the left endpoint carries the post-jump value
      const double x0 = (p == 0) ? rd.value_from_right(i, s0) : rd.value(i, s0);
      acc += h / 6.0 *
             (term_inner_integrand(kind, term, s0, std::max(x0, 0.0)) +
              4.0 * term_inner_integrand(kind, term, sm,
                                         std::max(rd.value(i, sm), 0.0)) +
              term_inner_integrand(kind, term, s1, std::max(rd.value(i, s1), 0.0)));
    }
  }
  return acc;
}

} // namespace

Trajectory integrate(const SystemSpec& spec, const GridFunction& history,
                     double t_end, SimOptions opts) {
  Trajectory traj;
  traj.history = history;
  traj.t_start = 0.0;
  if (!(t_end > 0.0)) throw ModelError("model", "t_end must be positive");

  double h_target = opts.step;
  if (h_target <= 0.0) h_target = spec.omega / 1024.0;
  const double hq = h_target; // quadrature pitch for distributed terms

  std::vector<double> y(std::size_t(spec.n));
  for (int i = 0; i < spec.n; ++i) y[std::size_t(i)] = history.eval(i, 0.0);

  // right-hand side at time s with current state ys; past read through rd
  auto rhs = [&](double s, const std::vector<double>& ys, const Reader& rd) {
    std::vector<double> f(std::size_t(spec.n));
    for (int i = 0; i < spec.n; ++i) {
      double v = -spec.death[std::size_t(i)].eval(s) * ys[std::size_t(i)];
      for (int j = 0; j < spec.n; ++j)
        if (j != i)
          v += spec.coupling[std::size_t(i)][std::size_t(j)].eval(s) *
               ys[std::size_t(j)];
      const auto& birth = spec.birth[std::size_t(i)];
      StateAccess access;
      access.value = [&rd, i](double r) { return std::max(rd.value(i, r), 0.0); };
      access.term_integral = [&](int l, double a, double b) {
        return inner_integral(spec, rd, i, birth.kind,
                              birth.terms[std::size_t(l)], a, b, hq);
      };
      v += eval_birth(birth, s, access);
      f[std::size_t(i)] = v;
    }
    return f;
  };

  const auto bps = breakpoints(spec, t_end);
  const double instant_tol = 1e-10;
  auto is_impulse_instant = [&](double t) {
    for (double tk : spec.impulses.instants) {
      const double ph = std::remainder(t - tk, spec.omega);
      if (std::abs(ph) <= instant_tol) return true;
    }
    return false;
  };
  auto schedule_index = [&](double t) {
    for (std::size_t k = 0; k < spec.impulses.count(); ++k)
      if (std::abs(std::remainder(t - spec.impulses.instants[k], spec.omega)) <=
          instant_tol)
        return k;
    return std::size_t(0);
  };

  double t = 0.0;
  // impulse exactly at t = 0 applies before the first step
  if (is_impulse_instant(0.0)) {
    ImpulseEvent ev;
    ev.t = 0.0;
    ev.before = y;
    const std::size_t k = schedule_index(0.0);
    for (int i = 0; i < spec.n; ++i)
      y[std::size_t(i)] +=
          spec.impulses.maps[k][std::size_t(i)].apply(std::max(y[std::size_t(i)], 0.0));
    ev.after = y;
    traj.events.push_back(ev);
  }

  for (double bp : bps) {
    const int m = std::max(1, int(std::ceil((bp - t) / h_target - 1e-12)));
    const double h = (bp - t) / m;
    for (int p = 0; p < m; ++p) {
      const double t0 = t + p * h;
      // k1 reads only completed output (all delayed arguments are <= t0)
      std::vector<double> f0 = rhs(t0, y, Reader{&traj, t0});
      const Reader rd{&traj, t0, &y, &f0};

      auto stage = [&](double c, const std::vector<double>& k) {
        std::vector<double> ys(y);
        for (std::size_t q = 0; q < ys.size(); ++q) ys[q] += c * h * k[q];
        return ys;
      };
      const std::vector<double> k1 = f0;
      const std::vector<double> y2 = stage(0.5, k1);
      const std::vector<double> k2 = rhs(t0 + 0.5 * h, y2, rd);
      const std::vector<double> y3 = stage(0.5, k2);
      const std::vector<double> k3 = rhs(t0 + 0.5 * h, y3, rd);
      const std::vector<double> y4 = stage(1.0, k3);
      const std::vector<double> k4 = rhs(t0 + h, y4, rd);

      std::vector<double> y1(y);
      for (std::size_t q = 0; q < y.size(); ++q)
        y1[q] += h / 6.0 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);

      for (double v : y1) {
        if (!std::isfinite(v)) {
          traj.finite = false;
          traj.note = "non-finite state at t=" + std::to_string(t0 + h);
          return traj;
        }
        traj.worst_negative = std::min(traj.worst_negative, v);
      }

      Trajectory::Step st;
      st.t0 = t0;
      st.h = h;
      st.y0 = y;
      st.f0 = f0;
      st.y1 = y1;
      // slope at the step end, before any impulse
      Reader rd_end{&traj, t0, &st.y0, &f0};
      st.f1 = rhs(t0 + h, y1, rd_end);
      traj.steps.push_back(std::move(st));
      y = y1;
    }
    t = bp;

    if (is_impulse_instant(t)) {
      ImpulseEvent ev;
      ev.t = t;
      ev.before = y;
      const std::size_t k = schedule_index(t);
      for (int i = 0; i < spec.n; ++i)
        y[std::size_t(i)] += spec.impulses.maps[k][std::size_t(i)].apply(
            std::max(y[std::size_t(i)], 0.0));
      ev.after = y;
      traj.events.push_back(ev);
      traj.worst_negative = std::min(
          traj.worst_negative, *std::min_element(y.begin(), y.end()));
    }
  }
  if (traj.worst_negative < -1e-10)
    traj.note = "positivity violated: state reached " +
                std::to_string(traj.worst_negative);
  return traj;
}

double periodicity_residual(const Trajectory& traj, double omega, double t_probe,
                            int probes) {
  if (t_probe + 2.0 * omega > traj.t_end() + 1e-9)
    throw ModelError("model", "probe window exceeds the trajectory");
  double worst = 0.0;
  const int n = traj.history.n();
  for (int p = 0; p <= probes; ++p) {
    const double t = t_probe + omega * double(p) / double(probes);
    for (int i = 0; i < n; ++i)
      worst = std::max(worst,
                       std::abs(traj.value(i, t + omega) - traj.value(i, t)));
  }
  return worst;
}

std::vector<double> long_run_floor(const Trajectory& traj, double window) {
  const int n = traj.history.n();
  std::vector<double> floor_v(std::size_t(n), 1e300);
  const double a = traj.t_end() - window;
  for (const auto& st : traj.steps) {
    if (st.t0 + st.h < a) continue;
    for (int i = 0; i < n; ++i) {
      for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double s = st.t0 + th * st.h;
        if (s < a) continue;
        floor_v[std::size_t(i)] =
            std::min(floor_v[std::size_t(i)], hermite(st, i, s));
      }
    }
  }
  for (const auto& ev : traj.events) {
    if (ev.t < a) continue;
    for (int i = 0; i < n; ++i)
      floor_v[std::size_t(i)] =
          std::min({floor_v[std::size_t(i)], ev.before[std::size_t(i)],
                    ev.after[std::size_t(i)]});
  }
  return floor_v;
}

} // namespace pdde
