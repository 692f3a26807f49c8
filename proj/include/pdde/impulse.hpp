#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdde/periodic_fn.hpp"

namespace pdde {

enum class ImpulseKind { none, linear, bounded_slope, saturating };

std::string to_string(ImpulseKind k);
ImpulseKind impulse_kind_from_string(const std::string& s);

/// One impulse map u -> I(u) acting on a single component at one instant,
/// together with certified slope bounds:
///
///   lower_slope * u <= I(u) <= upper_slope * u   for u >= 0,
///   lower_slope > -1.
///
/// `ratio0` is the limit of u / (u + I(u)) as u -> 0+, stored explicitly
/// (never inferred by limiting numerics).
class ImpulseMap {
public:
  ImpulseMap(); // kind none, I == 0

  static ImpulseMap none();
  static ImpulseMap linear(double eta);
  /// I(u) = eta * u / (1 + u / scale); slope eta at 0, flattening to 0.
  static ImpulseMap saturating(double eta, double scale);
  /// Monotone piecewise-linear table of (u, I(u)) knots starting at (0, 0),
  /// extended past the last knot with the final segment slope. ratio0
  /// defaults to 1 / (1 + first-segment slope) when not given.
  static ImpulseMap bounded_slope(double lower_slope, double upper_slope,
                                  std::vector<std::pair<double, double>> knots,
                                  std::optional<double> ratio0 = std::nullopt);

  double apply(double u) const; // I(u)

  /// u / (u + I(u)) for u > 0; ratio0 at u = 0. Lies in
  /// [1/(1+upper_slope), 1/(1+lower_slope)].
  double jump_ratio(double u) const;

  ImpulseKind kind() const { return kind_; }
  double lower_slope() const { return lower_slope_; }
  double upper_slope() const { return upper_slope_; }
  double ratio0() const { return ratio0_; }
  double scale() const { return scale_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  bool operator==(const ImpulseMap&) const = default;

private:
  void check_slopes() const;

  ImpulseKind kind_ = ImpulseKind::none;
  double lower_slope_ = 0.0;
  double upper_slope_ = 0.0;
  double ratio0_ = 1.0;
  double scale_ = 1.0;                             // saturating only
  std::vector<std::pair<double, double>> knots_;   // bounded_slope only
};

/// Impulse instants 0 <= t_1 < ... < t_p < omega and the per-instant,
/// per-component maps. All consumers extend the schedule periodically:
/// instant k+p acts at t_k + omega with the same map.
struct ImpulseSchedule {
  std::vector<double> instants;                 // within [0, omega)
  std::vector<std::vector<ImpulseMap>> maps;    // maps[k][i]

  std::size_t count() const { return instants.size(); }
  bool empty() const { return instants.empty(); }
  void validate(int n, double omega) const;     // (H1), (H2)

  bool operator==(const ImpulseSchedule&) const = default;
};

} // namespace pdde
