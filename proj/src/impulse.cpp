#include "pdde/impulse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdde {

std::string to_string(ImpulseKind k) {
  switch (k) {
    case ImpulseKind::none: return "none";
    case ImpulseKind::linear: return "linear";
    case ImpulseKind::bounded_slope: return "bounded_slope";
    case ImpulseKind::saturating: return "saturating";
  }
  return "none";
}

ImpulseKind impulse_kind_from_string(const std::string& s) {
  if (s == "none") return ImpulseKind::none;
  if (s == "linear") return ImpulseKind::linear;
  if (s == "bounded_slope") return ImpulseKind::bounded_slope;
  if (s == "saturating") return ImpulseKind::saturating;
  throw ModelError("config", "unknown impulse kind '" + s + "'");
}

ImpulseMap::ImpulseMap() = default;

void ImpulseMap::check_slopes() const {
  if (!(lower_slope_ > -1.0))
    throw ModelError("H2", "impulse lower slope must exceed -1, got " +
                               std::to_string(lower_slope_));
  if (lower_slope_ > upper_slope_)
    throw ModelError("H2", "impulse slopes out of order: lower " +
                               std::to_string(lower_slope_) + " > upper " +
                               std::to_string(upper_slope_));
}

ImpulseMap ImpulseMap::none() { return ImpulseMap(); }

ImpulseMap ImpulseMap::linear(double eta) {
  ImpulseMap m;
  m.kind_ = ImpulseKind::linear;
  m.lower_slope_ = m.upper_slope_ = eta;
  m.ratio0_ = 1.0 / (1.0 + eta);
  m.check_slopes();
  return m;
}

ImpulseMap ImpulseMap::saturating(double eta, double scale) {
  if (!(scale > 0.0))
    throw ModelError("H2", "saturating impulse needs positive scale");
  ImpulseMap m;
  m.kind_ = ImpulseKind::saturating;
  m.scale_ = scale;
  m.lower_slope_ = std::min(eta, 0.0);
  m.upper_slope_ = std::max(eta, 0.0);
  m.ratio0_ = 1.0 / (1.0 + eta); // slope at 0 is eta
  m.check_slopes();
  if (!(eta > -1.0))
    throw ModelError("H2", "saturating impulse slope at 0 must exceed -1");
  return m;
}

ImpulseMap ImpulseMap::bounded_slope(double lower_slope, double upper_slope,
                                     std::vector<std::pair<double, double>> knots,
                                     std::optional<double> ratio0) {
  ImpulseMap m;
  m.kind_ = ImpulseKind::bounded_slope;
  m.lower_slope_ = lower_slope;
  m.upper_slope_ = upper_slope;
  m.knots_ = std::move(knots);
  m.check_slopes();
  if (m.knots_.size() < 2 || m.knots_.front().first != 0.0 ||
      m.knots_.front().second != 0.0)
    throw ModelError("H2", "bounded_slope table must start at (0, 0) and hold "
                           ">= 2 knots");
  for (std::size_t k = 0; k + 1 < m.knots_.size(); ++k) {
    if (!(m.knots_[k + 1].first > m.knots_[k].first))
      throw ModelError("H2", "bounded_slope table abscissae must increase");
    if (m.knots_[k + 1].second < m.knots_[k].second)
      throw ModelError("H2", "bounded_slope table must be monotone");
  }
  // piecewise-linear: the slope bounds hold everywhere iff they hold at knots
  // and the extension slope is admissible
  for (const auto& [u, f] : m.knots_) {
    if (u == 0.0) continue;
    if (f < lower_slope * u - 1e-12 * (1.0 + std::abs(f)) ||
        f > upper_slope * u + 1e-12 * (1.0 + std::abs(f)))
      throw ModelError("H2", "bounded_slope table leaves the declared slope "
                             "band at u=" + std::to_string(u));
  }
  const auto& a = m.knots_[m.knots_.size() - 2];
  const auto& b = m.knots_.back();
  const double ext = (b.second - a.second) / (b.first - a.first);
  if (ext < lower_slope - 1e-12 || ext > upper_slope + 1e-12)
    throw ModelError("H2", "bounded_slope extension slope outside band");
  if (ratio0) {
    m.ratio0_ = *ratio0;
  } else {
    const double s0 = m.knots_[1].second / m.knots_[1].first;
    m.ratio0_ = 1.0 / (1.0 + s0);
  }
  return m;
}

double ImpulseMap::apply(double u) const {
  switch (kind_) {
    case ImpulseKind::none:
      return 0.0;
    case ImpulseKind::linear:
      return upper_slope_ * u;
    case ImpulseKind::saturating: {
      // slope at 0 is stored in ratio0; recover eta from it
      const double eta = 1.0 / ratio0_ - 1.0;
      return eta * u / (1.0 + u / scale_);
    }
    case ImpulseKind::bounded_slope: {
      if (u <= knots_.back().first) {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                                   [](double x, const auto& kn) { return x < kn.first; });
        const auto hi = (it == knots_.end()) ? knots_.end() - 1 : it;
        const auto lo = hi - 1;
        const double w = (u - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
      }
      const auto& a = knots_[knots_.size() - 2];
      const auto& b = knots_.back();
      const double ext = (b.second - a.second) / (b.first - a.first);
      return b.second + ext * (u - b.first);
    }
  }
  return 0.0;
}

double ImpulseMap::jump_ratio(double u) const {
  if (u <= 0.0) return ratio0_;
  if (kind_ == ImpulseKind::none) return 1.0;
  if (kind_ == ImpulseKind::linear) return ratio0_;
  return u / (u + apply(u)); // u + I(u) >= u (1 + lower_slope) > 0
}

void ImpulseSchedule::validate(int n, double omega) const {
  if (maps.size() != instants.size())
    throw ModelError("H1", "impulse schedule has " + std::to_string(instants.size()) +
                               " instants but " + std::to_string(maps.size()) +
                               " map rows");
  double prev = -1.0;
  for (double t : instants) {
    if (!(t >= 0.0 && t < omega))
      throw ModelError("H1", "impulse instant " + std::to_string(t) +
                                 " outside [0, omega)");
    if (!(t > prev))
      throw ModelError("H1", "impulse instants must be strictly increasing");
    prev = t;
  }
  for (const auto& row : maps)
    if (row.size() != static_cast<std::size_t>(n))
      throw ModelError("H1", "impulse map row does not cover all components");
}

} // namespace pdde
