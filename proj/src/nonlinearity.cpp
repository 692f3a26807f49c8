#include "pdde/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace pdde {

std::string to_string(NonlinKind k) {
  switch (k) {
    case NonlinKind::nicholson_discrete: return "nicholson_discrete";
    case NonlinKind::nicholson_distributed: return "nicholson_distributed";
    case NonlinKind::nicholson_mixed: return "nicholson_mixed";
    case NonlinKind::hematopoiesis_distributed: return "hematopoiesis_distributed";
    case NonlinKind::hematopoiesis_discrete: return "hematopoiesis_discrete";
    case NonlinKind::mackey_glass_distributed: return "mackey_glass_distributed";
    case NonlinKind::custom_table: return "custom_table";
  }
  return "nicholson_discrete";
}

NonlinKind nonlin_kind_from_string(const std::string& s) {
  if (s == "nicholson_discrete") return NonlinKind::nicholson_discrete;
  if (s == "nicholson_distributed") return NonlinKind::nicholson_distributed;
  if (s == "nicholson_mixed") return NonlinKind::nicholson_mixed;
  if (s == "hematopoiesis_distributed") return NonlinKind::hematopoiesis_distributed;
  if (s == "hematopoiesis_discrete") return NonlinKind::hematopoiesis_discrete;
  if (s == "mackey_glass_distributed") return NonlinKind::mackey_glass_distributed;
  if (s == "custom_table") return NonlinKind::custom_table;
  throw ModelError("config", "unknown nonlinearity kind '" + s + "'");
}

double PLTable::operator()(double x) const {
  if (u.empty()) return 0.0;
  if (u.size() == 1) return f.front();
  if (x <= u.front()) {
    const double s = (f[1] - f[0]) / (u[1] - u[0]);
    return f.front() + s * (x - u.front());
  }
  if (x >= u.back()) {
    const std::size_t m = u.size();
    const double s = (f[m - 1] - f[m - 2]) / (u[m - 1] - u[m - 2]);
    return f.back() + s * (x - u.back());
  }
  auto it = std::upper_bound(u.begin(), u.end(), x);
  const std::size_t hi = std::size_t(it - u.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - u[lo]) / (u[hi] - u[lo]);
  return f[lo] + w * (f[hi] - f[lo]);
}

double PLTable::slope_at_zero() const {
  if (u.size() < 2) return 0.0;
  return (f[1] - f[0]) / (u[1] - u[0]);
}

double PLTable::slope_at_infinity() const {
  if (u.size() < 2) return 0.0;
  const std::size_t m = u.size();
  return (f[m - 1] - f[m - 2]) / (u[m - 1] - u[m - 2]);
}

bool NonlinearityDescriptor::has_distributed_terms() const {
  return kind == NonlinKind::nicholson_distributed ||
         kind == NonlinKind::hematopoiesis_distributed ||
         kind == NonlinKind::mackey_glass_distributed;
}

double NonlinearityDescriptor::max_delay() const {
  double tau = 0.0;
  for (const auto& t : terms) {
    tau = std::max(tau, t.tau.max_on_period());
    if (kind == NonlinKind::nicholson_mixed)
      tau = std::max(tau, t.theta.max_on_period());
  }
  return tau;
}

double NonlinearityDescriptor::zero_state_integral(double omega) const {
  double v = 0.0;
  switch (kind) {
    case NonlinKind::hematopoiesis_distributed:
    case NonlinKind::hematopoiesis_discrete:
      for (const auto& t : terms) v += t.beta.period_integral();
      break;
    case NonlinKind::custom_table:
      for (const auto& t : terms) {
        const double f0 = t.table.u.empty() ? 0.0 : t.table(0.0);
        v += f0 * t.beta.period_integral();
      }
      break;
    default:
      break; // Nicholson / Mackey-Glass births vanish at zero state
  }
  (void)omega;
  return v;
}

void EnvelopePair::validate(int n, double omega) const {
  if (b1.size() != std::size_t(n) || b2.size() != std::size_t(n))
    throw ModelError("H6", "envelope pair must carry one floor and one ceiling "
                           "per component");
  if (!(r0 > 0.0 && r0 < R0))
    throw ModelError("H6", "envelope radii must satisfy 0 < r0 < R0");
  for (const auto* vec : {&b1, &b2})
    for (const auto& f : *vec) {
      if (f.period() != omega)
        throw ModelError("H6", "envelope function period mismatch");
      if (!(f.period_integral() > 0.0))
        throw ModelError("H6", "envelope functions need positive period integral");
    }
}

void LimitProfile::validate(int n) const {
  auto sz = std::size_t(n);
  if (f0.size() != sz || F0.size() != sz || finf.size() != sz || Finf.size() != sz)
    throw ModelError("model", "limit profile must carry four n-vectors");
  for (int i = 0; i < n; ++i) {
    if (f0[i] > F0[i] || finf[i] > Finf[i])
      throw ModelError("model", "limit profile ordering violated at component " +
                                    std::to_string(i + 1));
  }
}

double term_inner_integrand(NonlinKind kind, const NonlinTerm& term, double s,
                            double xv) {
  switch (kind) {
    case NonlinKind::nicholson_distributed:
      return term.gamma.eval(s) * xv * std::exp(-term.c.eval(s) * xv);
    case NonlinKind::hematopoiesis_distributed:
    case NonlinKind::mackey_glass_distributed:
      return xv;
    default:
      return 0.0;
  }
}

double eval_birth(const NonlinearityDescriptor& d, double t, const StateAccess& x) {
  double g = 0.0;
  for (std::size_t l = 0; l < d.terms.size(); ++l) {
    const auto& term = d.terms[l];
    const double beta = term.beta.eval(t);
    switch (d.kind) {
      case NonlinKind::nicholson_discrete: {
        const double xd = x.value(t - term.tau.eval(t));
        g += beta * xd * std::exp(-term.c.eval(t) * xd);
        break;
      }
      case NonlinKind::nicholson_mixed: {
        const double xd = x.value(t - term.tau.eval(t));
        const double xh = x.value(t - term.theta.eval(t));
        g += beta * xd * std::exp(-term.c.eval(t) * xh);
        break;
      }
      case NonlinKind::nicholson_distributed: {
        g += beta * x.term_integral(int(l), t - term.tau.eval(t), t);
        break;
      }
      case NonlinKind::hematopoiesis_distributed: {
        const double y = x.term_integral(int(l), t - term.tau.eval(t), t);
        g += beta / (1.0 + term.c.eval(t) * std::pow(std::max(y, 0.0), term.alpha));
        break;
      }
      case NonlinKind::hematopoiesis_discrete: {
        const double xd = std::max(x.value(t - term.tau.eval(t)), 0.0);
        g += beta / (1.0 + term.c.eval(t) * std::pow(xd, term.alpha));
        break;
      }
      case NonlinKind::mackey_glass_distributed: {
        const double y = std::max(x.term_integral(int(l), t - term.tau.eval(t), t), 0.0);
        g += beta * y / (1.0 + term.c.eval(t) * std::pow(y, term.alpha));
        break;
      }
      case NonlinKind::custom_table: {
        const double xd = x.value(t - term.tau.eval(t));
        g += beta * term.table(xd);
        break;
      }
    }
  }
  return g;
}

std::function<double(double)> derived_rate_floor(const NonlinearityDescriptor& d) {
  switch (d.kind) {
    case NonlinKind::nicholson_discrete:
    case NonlinKind::nicholson_mixed: {
      auto terms = d.terms;
      return [terms](double t) {
        double b = 0.0;
        for (const auto& term : terms) b += term.beta.eval(t);
        return b;
      };
    }
    case NonlinKind::nicholson_distributed: {
      // sum_l beta(t) int_{t-tau(t)}^t gamma(s) ds, inner integral exact
      auto terms = d.terms;
      return [terms](double t) {
        double b = 0.0;
        for (const auto& term : terms) {
          const double a = t - term.tau.eval(t);
          b += term.beta.eval(t) *
               (term.gamma.antiderivative(t) - term.gamma.antiderivative(a));
        }
        return b;
      };
    }
    case NonlinKind::mackey_glass_distributed: {
      auto terms = d.terms;
      return [terms](double t) {
        double b = 0.0;
        for (const auto& term : terms) b += term.beta.eval(t) * term.tau.eval(t);
        return b;
      };
    }
    default:
      throw ModelError("model", "rate floor undefined for kind " + to_string(d.kind));
  }
}

} // namespace pdde
