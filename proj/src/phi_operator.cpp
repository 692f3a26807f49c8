#include "pdde/phi_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdde/nonlinearity.hpp"

namespace pdde {

namespace {

// Cumulative integral of s -> q(s, x_i(s)) over the grid of x, with
// breakpoint-aligned Simpson panels; evaluable at any real argument through
// the periodic extension.
struct Cumulative {
  const GridFunction* x = nullptr;
  int i = 0;
  std::function<double(double, double)> q; // q(s, x_i(s))
  std::vector<double> node_values;

  double integrand(double s, bool right_side) const {
    const double xv = std::max(
        right_side ? x->eval_right(i, s) : x->eval(i, s), 0.0);
    return q(s, xv);
  }

  void build() {
    node_values.assign(x->nodes(), 0.0);
    for (std::size_t p = 0; p + 1 < x->nodes(); ++p) {
      const double a = x->node(p), b = x->node(p + 1);
      const double h = b - a;
      node_values[p + 1] =
          node_values[p] + h / 6.0 *
                               (integrand(a, true) +
                                4.0 * integrand(0.5 * (a + b), false) +
                                integrand(b, false));
    }
  }

  double at(double r) const {
    const double omega = x->omega();
    const double wraps = std::floor(r / omega);
    double rr = r - wraps * omega;
    if (rr < 0.0) rr = 0.0;
    auto it = std::upper_bound(x->grid().begin(), x->grid().end(), rr);
    std::size_t p = (it == x->grid().begin()) ? 0 : std::size_t(it - x->grid().begin()) - 1;
    if (p >= x->nodes() - 1) p = x->nodes() - 2;
    const double a = x->node(p);
    const double partial =
        (rr - a) / 6.0 *
        (integrand(a, true) + 4.0 * integrand(0.5 * (a + rr), false) +
         integrand(rr, false));
    return node_values[p] + partial + wraps * node_values.back();
  }
};

} // namespace

ConeParams ConeParams::from_bounds(const std::vector<ComponentBounds>& b) {
  ConeParams c;
  for (const auto& cb : b) c.sigma.push_back(cb.cone_sigma);
  return c;
}

GridFunction apply_phi(const SystemSpec& spec, const GridFunction& x) {
  if (x.jump_nodes().size() != spec.impulses.count())
    throw ModelError("model", "grid function breakpoints do not match the "
                              "impulse schedule");
  const std::size_t M = x.nodes() - 1;
  GridFunction out(x.grid(), spec.n, spec.omega,
                   std::vector<std::size_t>(x.jump_nodes()));

  for (int i = 0; i < spec.n; ++i) {
    const auto& birth = spec.birth[std::size_t(i)];

    // inner cumulatives for distributed birth terms
    std::vector<Cumulative> inner(birth.terms.size());
    if (birth.has_distributed_terms()) {
      for (std::size_t l = 0; l < birth.terms.size(); ++l) {
        inner[l].x = &x;
        inner[l].i = i;
        const auto kind = birth.kind;
        const auto term = birth.terms[l];
        inner[l].q = [kind, term](double s, double xv) {
          return term_inner_integrand(kind, term, s, xv);
        };
        inner[l].build();
      }
    }

    StateAccess access;
    access.value = [&x, i](double s) { return std::max(x.eval(i, s), 0.0); };
    access.term_integral = [&inner](int l, double a, double b) {
      return inner[std::size_t(l)].at(b) - inner[std::size_t(l)].at(a);
    };

    auto forcing = [&](double s, bool right_side) {
      double h = 0.0;
      for (int j = 0; j < spec.n; ++j) {
        if (j == i) continue;
        const double xj = right_side ? x.eval_right(j, s) : x.eval(j, s);
        h += spec.coupling[std::size_t(i)][std::size_t(j)].eval(s) *
             std::max(xj, 0.0);
      }
      return h + eval_birth(birth, s, access);
    };

    // jump-ratio products up to each node, left and right of the node
    std::vector<double> Bl(M + 1, 1.0), Br(M + 1, 1.0);
    {
      std::size_t k = 0; // index into the schedule
      for (std::size_t m = 0; m <= M; ++m) {
        Bl[m] = (m == 0) ? 1.0 : Br[m - 1];
        Br[m] = Bl[m];
        if (x.is_jump(m)) {
          const double u = std::max(x.left(m, i), 0.0);
          Br[m] *= spec.impulses.maps[k][std::size_t(i)].jump_ratio(u);
          ++k;
        }
      }
    }

    // cumulative of B(s) e^{D(s)} H(s); B is constant inside each panel
    std::vector<double> C(M + 1, 0.0);
    for (std::size_t p = 0; p < M; ++p) {
      const double a = x.node(p), b = x.node(p + 1);
      const double mid = 0.5 * (a + b);
      const double eDa = std::exp(decay_integral(spec, i, a));
      const double eDm = std::exp(decay_integral(spec, i, mid));
      const double eDb = std::exp(decay_integral(spec, i, b));
      C[p + 1] = C[p] + (b - a) / 6.0 * Br[p] *
                            (eDa * forcing(a, true) +
                             4.0 * eDm * forcing(mid, false) +
                             eDb * forcing(b, false));
    }

    const double eDomega = std::exp(decay_integral(spec, i, spec.omega));
    const double loop = Bl[M] * eDomega; // full-period contraction factor
    if (!(loop > 1.0)) {
      std::ostringstream os;
      os << "component " << i + 1 << ": full-period factor " << loop
         << " does not exceed 1";
      throw ModelError("H3", os.str());
    }
    const double gain = 1.0 / (loop - 1.0);

    for (std::size_t m = 0; m <= M; ++m) {
      const double eDt = std::exp(decay_integral(spec, i, x.node(m)));
      const double numer = gain * C[M] + C[m];
      out.set(m, i, numer / (Bl[m] * eDt), numer / (Br[m] * eDt));
    }
  }
  out.close_periodically();
  return out;
}

double jump_identity_violation(const SystemSpec& spec, const GridFunction& x,
                               const GridFunction& y) {
  double worst = 0.0;
  std::size_t k = 0;
  for (std::size_t m : y.jump_nodes()) {
    for (int i = 0; i < spec.n; ++i) {
      const double u = std::max(x.left(m, i), 0.0);
      const double ratio = spec.impulses.maps[k][std::size_t(i)].jump_ratio(u);
      const double expected = y.left(m, i) / ratio;
      const double viol =
          std::abs(y.right(m, i) - expected) / (1.0 + std::abs(y.left(m, i)));
      worst = std::max(worst, viol);
    }
    ++k;
  }
  return worst;
}

std::pair<bool, double> cone_membership(const GridFunction& x,
                                        const ConeParams& cone) {
  double worst = 1e300;
  for (int i = 0; i < x.n(); ++i) {
    const double amp = x.sup_norm(i);
    const double tol = 1e-12 * std::max(1.0, amp);
    for (std::size_t m = 0; m < x.nodes(); ++m)
      for (double v : {x.left(m, i), x.right(m, i)})
        worst = std::min(worst, v - cone.sigma[std::size_t(i)] * amp + tol);
  }
  return {worst >= 0.0, worst};
}

namespace {

GridFunction blend(double wa, const GridFunction& a, double wb,
                   const GridFunction& b) {
  GridFunction out = a;
  for (std::size_t m = 0; m < a.nodes(); ++m)
    for (int i = 0; i < a.n(); ++i)
      out.set(m, i, wa * a.left(m, i) + wb * b.left(m, i),
              wa * a.right(m, i) + wb * b.right(m, i));
  return out;
}

double defect(const GridFunction& x, const GridFunction& y) {
  double r = 0.0;
  for (std::size_t m = 0; m < x.nodes(); ++m)
    for (int i = 0; i < x.n(); ++i)
      r = std::max({r, std::abs(y.left(m, i) - x.left(m, i)),
                    std::abs(y.right(m, i) - x.right(m, i))});
  return r;
}

bool all_finite(const GridFunction& x) {
  for (std::size_t m = 0; m < x.nodes(); ++m)
    for (int i = 0; i < x.n(); ++i)
      if (!std::isfinite(x.left(m, i)) || !std::isfinite(x.right(m, i)))
        return false;
  return true;
}

// secant-history acceleration for the fixed-point map (history depth 5)
class SecantAccelerator {
public:
  explicit SecantAccelerator(std::size_t depth) : depth_(depth) {}

  std::vector<double> next(const std::vector<double>& x,
                           const std::vector<double>& gx) {
    std::vector<double> f(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) f[k] = gx[k] - x[k];
    gs_.push_back(gx);
    fs_.push_back(f);
    if (gs_.size() > depth_ + 1) {
      gs_.erase(gs_.begin());
      fs_.erase(fs_.begin());
    }
    const std::size_t m = gs_.size() - 1;
    if (m == 0) return gx;

    // least squares for the combination weights over residual differences
    std::vector<std::vector<double>> dF(m, std::vector<double>(x.size()));
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t k = 0; k < x.size(); ++k)
        dF[c][k] = fs_[m][k] - fs_[m - 1 - c][k];
    std::vector<double> A(m * m, 0.0), rhs(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += dF[r][k] * dF[c][k];
        A[r * m + c] = s + (r == c ? 1e-12 : 0.0);
      }
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) s += dF[r][k] * fs_[m][k];
      rhs[r] = s;
    }
    // Gaussian elimination, m <= 5
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m; ++r)
        if (std::abs(A[r * m + col]) > std::abs(A[piv * m + col])) piv = r;
      for (std::size_t c = 0; c < m; ++c) std::swap(A[col * m + c], A[piv * m + c]);
      std::swap(rhs[col], rhs[piv]);
      if (A[col * m + col] == 0.0) return gx;
      for (std::size_t r = col + 1; r < m; ++r) {
        const double fct = A[r * m + col] / A[col * m + col];
        for (std::size_t c = col; c < m; ++c) A[r * m + c] -= fct * A[col * m + c];
        rhs[r] -= fct * rhs[col];
      }
    }
    std::vector<double> gamma(m, 0.0);
    for (std::size_t r = m; r-- > 0;) {
      double s = rhs[r];
      for (std::size_t c = r + 1; c < m; ++c) s -= A[r * m + c] * gamma[c];
      gamma[r] = s / A[r * m + r];
    }

    std::vector<double> out = gs_[m];
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t k = 0; k < x.size(); ++k)
        out[k] -= gamma[c] * (gs_[m][k] - gs_[m - 1 - c][k]);
    for (double& v : out)
      if (v < 0.0) v = 0.0; // stay in the nonnegative cone
    return out;
  }

private:
  std::size_t depth_;
  std::vector<std::vector<double>> gs_, fs_;
};

} // namespace

FixedPointResult solve_fixed_point(const SystemSpec& spec, SolveOptions opts,
                                   std::optional<GridFunction> initial) {
  GridFunction x;
  if (initial) {
    x = *initial;
  } else {
    double level = 1.0;
    if (spec.envelopes && spec.envelopes->r0 > 0.0)
      level = std::sqrt(spec.envelopes->r0 * spec.envelopes->R0);
    x = GridFunction::constant(spec.omega,
                               std::vector<double>(std::size_t(spec.n), level),
                               spec.impulses.instants, opts.panels);
  }

  FixedPointResult res;
  double lambda = opts.damping;
  double prev_defect = 1e300;
  GridFunction best = x;
  double best_defect = 1e300;
  int it = 0;
  bool converged = false;

  for (; it < opts.max_iter; ++it) {
    GridFunction y = apply_phi(spec, x);
    if (!all_finite(y)) {
      res.note = "non-finite iterate at iteration " + std::to_string(it + 1);
      break;
    }
    const double d = defect(x, y);
    if (d < best_defect) {
      best_defect = d;
      best = x;
    }
    if (d <= opts.tol * (1.0 + x.sup_norm())) {
      converged = true;
      best = y;
      best_defect = d;
      ++it;
      break;
    }
    if (y.sup_norm() > 1e12) {
      res.note = "iteration diverged at iteration " + std::to_string(it + 1);
      break;
    }
    if (d > prev_defect * (1.0 + 1e-9)) lambda = std::max(lambda / 2.0, 1.0 / 64.0);
    prev_defect = d;
    x = blend(1.0 - lambda, x, lambda, y);
  }

  if (!converged && opts.accelerate && res.note.empty()) {
    SecantAccelerator acc(5);
    x = best;
    const int extra = std::max(50, opts.max_iter / 4);
    for (int k = 0; k < extra; ++k, ++it) {
      GridFunction y = apply_phi(spec, x);
      if (!all_finite(y)) {
        res.note = "non-finite iterate during acceleration";
        break;
      }
      const double d = defect(x, y);
      if (d < best_defect) {
        best_defect = d;
        best = x;
      }
      if (d <= opts.tol * (1.0 + x.sup_norm())) {
        converged = true;
        best = y;
        best_defect = d;
        ++it;
        break;
      }
      auto xn = acc.next(x.to_flat(), y.to_flat());
      x.from_flat(xn);
    }
    if (!converged && res.note.empty())
      res.note = "stagnated; best iterate returned";
  }

  res.solution = best;
  res.iterations = it;
  res.final_damping = lambda;
  res.converged = converged;
  {
    GridFunction y = apply_phi(spec, res.solution);
    res.residual = defect(res.solution, y);
  }
  res.positivity_floor = res.solution.min_value();
  auto cone = ConeParams::from_bounds(impulse_bounds(spec));
  auto [ok, margin] = cone_membership(res.solution, cone);
  res.cone_ok = ok;
  (void)margin;
  if (res.converged && res.positivity_floor <= 0.0)
    res.note = (res.note.empty() ? "" : res.note + "; ") +
               std::string("converged to a solution touching zero");
  return res;
}

} // namespace pdde
