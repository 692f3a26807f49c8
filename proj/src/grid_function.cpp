#include "pdde/grid_function.hpp"

#include <algorithm>
#include <cmath>

namespace pdde {

GridFunction::GridFunction(std::vector<double> grid, int n, double omega,
                           std::vector<std::size_t> jump_nodes)
    : grid_(std::move(grid)), jump_nodes_(std::move(jump_nodes)), n_(n),
      omega_(omega) {
  if (grid_.size() < 2 || grid_.front() != 0.0 ||
      std::abs(grid_.back() - omega_) > 1e-12 * omega_)
    throw ModelError("model", "grid must span [0, omega]");
  grid_.back() = omega_;
  left_.assign(grid_.size() * n_, 0.0);
  right_.assign(grid_.size() * n_, 0.0);
  jump_flag_.assign(grid_.size(), 0);
  for (auto m : jump_nodes_) jump_flag_[m] = 1;

  // smooth segments between consecutive jump nodes (and the period seam)
  segments_.clear();
  std::size_t start = 0;
  for (std::size_t m = 1; m < grid_.size(); ++m) {
    const bool cut = jump_flag_[m] || m + 1 == grid_.size();
    if (cut) {
      segments_.push_back({start, m});
      start = m;
    }
  }
  segment_of_.assign(grid_.size(), 0);
  for (std::size_t s = 0; s < segments_.size(); ++s)
    for (std::size_t m = segments_[s].first; m <= segments_[s].second; ++m)
      segment_of_[m] = s;
}

std::vector<double> GridFunction::make_grid(double omega,
                                            const std::vector<double>& instants,
                                            int panels) {
  std::vector<double> g;
  g.reserve(std::size_t(panels) + instants.size() + 1);
  for (int m = 0; m <= panels; ++m) g.push_back(omega * double(m) / double(panels));
  const double tol = 1e-12 * omega;
  for (double t : instants) {
    bool present = false;
    for (double u : g)
      if (std::abs(u - t) <= tol) { present = true; break; }
    if (!present) g.push_back(t);
  }
  std::sort(g.begin(), g.end());
  return g;
}

GridFunction GridFunction::from_sampler(
    double omega, const std::vector<double>& instants, int panels, int n,
    const std::function<double(int, double)>& f) {
  auto grid = make_grid(omega, instants, panels);
  std::vector<std::size_t> jumps;
  const double tol = 1e-12 * omega;
  for (double t : instants)
    for (std::size_t m = 0; m < grid.size(); ++m)
      if (std::abs(grid[m] - t) <= tol) jumps.push_back(m);
  std::sort(jumps.begin(), jumps.end());
  GridFunction x(std::move(grid), n, omega, std::move(jumps));
  for (std::size_t m = 0; m < x.nodes(); ++m)
    for (int i = 0; i < n; ++i) x.set_both(m, i, f(i, x.node(m)));
  x.close_periodically();
  return x;
}

GridFunction GridFunction::constant(double omega, const std::vector<double>& value,
                                    const std::vector<double>& instants, int panels) {
  return from_sampler(omega, instants, panels, int(value.size()),
                      [&](int i, double) { return value[std::size_t(i)]; });
}

void GridFunction::set(std::size_t m, int i, double left_value, double right_value) {
  left_[m * n_ + i] = left_value;
  right_[m * n_ + i] = right_value;
}

void GridFunction::close_periodically() {
  const std::size_t last = grid_.size() - 1;
  for (int i = 0; i < n_; ++i) {
    right_[last * n_ + i] = right_[0 * n_ + i];
    left_[0 * n_ + i] = left_[last * n_ + i];
  }
}

std::size_t GridFunction::locate(double t) const {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.begin()) return 0;
  std::size_t p = std::size_t(it - grid_.begin()) - 1;
  if (p >= grid_.size() - 1) p = grid_.size() - 2;
  return p;
}

double GridFunction::interp(int i, double t, bool right_at_jump) const {
  // reduce to [0, omega]
  double r = t - omega_ * std::floor(t / omega_);
  if (r < 0.0) r += omega_;
  const double snap = 1e-12 * omega_;

  // exact node hit
  const std::size_t p = locate(r);
  for (std::size_t m : {p, p + 1}) {
    if (m < grid_.size() && std::abs(grid_[m] - r) <= snap) {
      if (jump_flag_[m])
        return right_at_jump ? right_[m * n_ + i] : left_[m * n_ + i];
      return left_[m * n_ + i];
    }
  }

  // strictly inside panel p: cubic stencil clamped to the smooth segment
  const auto [a, b] = segments_[segment_of_[p]];
  auto value_at = [&](std::size_t m) {
    // inside the segment, the segment-start node contributes its right value
    if (m == a) return right_[m * n_ + i];
    return left_[m * n_ + i];
  };
  const std::size_t seg_len = b - a; // number of panels in segment
  if (seg_len == 0) return value_at(a);
  if (seg_len < 3) {
    // linear within the panel
    const double w = (r - grid_[p]) / (grid_[p + 1] - grid_[p]);
    return (1.0 - w) * value_at(p) + w * value_at(p + 1);
  }
  std::size_t s = (p > a) ? p - 1 : a;
  if (s + 3 > b) s = b - 3;
  double xs[4], ys[4];
  for (int k = 0; k < 4; ++k) {
    xs[k] = grid_[s + k];
    ys[k] = value_at(s + k);
  }
  // 4-point Lagrange
  double v = 0.0;
  for (int k = 0; k < 4; ++k) {
    double lk = ys[k];
    for (int j = 0; j < 4; ++j)
      if (j != k) lk *= (r - xs[j]) / (xs[k] - xs[j]);
    v += lk;
  }
  return v;
}

double GridFunction::eval(int i, double t) const { return interp(i, t, false); }
double GridFunction::eval_right(int i, double t) const { return interp(i, t, true); }

double GridFunction::sup_norm(int i) const {
  double v = 0.0;
  for (std::size_t m = 0; m < grid_.size(); ++m)
    v = std::max({v, std::abs(left_[m * n_ + i]), std::abs(right_[m * n_ + i])});
  return v;
}

double GridFunction::sup_norm() const {
  double v = 0.0;
  for (int i = 0; i < n_; ++i) v = std::max(v, sup_norm(i));
  return v;
}

double GridFunction::min_value(int i) const {
  double v = 1e300;
  for (std::size_t m = 0; m < grid_.size(); ++m)
    v = std::min({v, left_[m * n_ + i], right_[m * n_ + i]});
  return v;
}

double GridFunction::min_value() const {
  double v = 1e300;
  for (int i = 0; i < n_; ++i) v = std::min(v, min_value(i));
  return v;
}

double GridFunction::HistoryWindow::operator()(int i, double s) const {
  if (s < -tau - 1e-12 || s > 1e-12)
    throw ModelError("model", "history window argument outside [-tau, 0]");
  return x->eval(i, t + s);
}

GridFunction::HistoryWindow GridFunction::history_window(double t,
                                                         double tau) const {
  if (tau < 0.0) throw ModelError("model", "history window needs tau >= 0");
  return HistoryWindow{this, t, tau};
}

std::vector<double> GridFunction::to_flat() const {
  std::vector<double> v(left_);
  for (auto m : jump_nodes_)
    for (int i = 0; i < n_; ++i) v.push_back(right_[m * n_ + i]);
  return v;
}

void GridFunction::from_flat(const std::vector<double>& v) {
  std::copy(v.begin(), v.begin() + std::ptrdiff_t(left_.size()), left_.begin());
  right_ = left_;
  std::size_t pos = left_.size();
  for (auto m : jump_nodes_)
    for (int i = 0; i < n_; ++i) right_[m * n_ + i] = v[pos++];
  close_periodically();
}

} // namespace pdde
