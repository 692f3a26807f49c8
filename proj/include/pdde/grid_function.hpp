#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pdde/periodic_fn.hpp"

namespace pdde {

/// Sampled omega-periodic vector function on a breakpoint-aligned grid over
/// [0, omega]. Every impulse instant is a grid node, and at those nodes both
/// the (left-continuous) value and the post-impulse right value are stored.
/// Between consecutive breakpoints the function is treated as smooth and
/// interpolated with a clamped 4-point cubic stencil.
///
/// Node 0 and the node at omega carry identical values (periodic closure);
/// evaluation at arbitrary real t reduces modulo omega.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(std::vector<double> grid, int n, double omega,
               std::vector<std::size_t> jump_nodes);

  /// Uniform panels over [0, omega] merged with the impulse instants.
  /// `panels` counts the uniform subdivisions.
  static std::vector<double> make_grid(double omega,
                                       const std::vector<double>& instants,
                                       int panels);
  static GridFunction from_sampler(
      double omega, const std::vector<double>& instants, int panels, int n,
      const std::function<double(int, double)>& f);
  static GridFunction constant(double omega, const std::vector<double>& value,
                               const std::vector<double>& instants = {},
                               int panels = 16);

  int n() const { return n_; }
  double omega() const { return omega_; }
  std::size_t nodes() const { return grid_.size(); }
  double node(std::size_t m) const { return grid_[m]; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::size_t>& jump_nodes() const { return jump_nodes_; }
  bool is_jump(std::size_t m) const { return jump_flag_[m]; }

  double left(std::size_t m, int i) const { return left_[m * n_ + i]; }
  double right(std::size_t m, int i) const { return right_[m * n_ + i]; }
  void set(std::size_t m, int i, double left_value, double right_value);
  void set_both(std::size_t m, int i, double value) { set(m, i, value, value); }

  /// Copies node-0 values to the omega node (and vice-versa checks are the
  /// caller's concern); call after filling values.
  void close_periodically();

  /// Left-continuous evaluation: at a jump node the stored left value.
  double eval(int i, double t) const;
  /// Right limit at jump nodes, identical elsewhere.
  double eval_right(int i, double t) const;

  double sup_norm(int i) const;
  double sup_norm() const;
  double min_value(int i) const;
  double min_value() const;

  /// Flattened copy (all left values, then the right values at jump nodes);
  /// inverse of from_flat with the same layout.
  std::vector<double> to_flat() const;
  void from_flat(const std::vector<double>& v);

  /// Trailing history segment: evaluates component i at t + s for
  /// s in [-tau, 0], with the periodic extension and left continuity at
  /// the jump instants.
  struct HistoryWindow {
    const GridFunction* x;
    double t, tau;
    double operator()(int i, double s) const;
  };
  HistoryWindow history_window(double t, double tau) const;

private:
  double interp(int i, double t, bool right_at_jump) const;
  std::size_t locate(double t) const; // panel index with grid[p] <= t < grid[p+1]

  std::vector<double> grid_;
  std::vector<double> left_, right_; // [node * n + i]
  std::vector<std::size_t> jump_nodes_;
  std::vector<char> jump_flag_;
  std::vector<std::size_t> segment_of_; // per node, index of enclosing smooth segment
  std::vector<std::pair<std::size_t, std::size_t>> segments_; // node ranges [a, b]
  int n_ = 0;
  double omega_ = 0.0;
};

} // namespace pdde
