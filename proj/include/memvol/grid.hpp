#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace memvol {

/// Uniform grid t_k = k T / n, k = 0..n.
class PathGrid {
 public:
  PathGrid(std::size_t n, double horizon);

  std::size_t n() const { return n_; }
  double horizon() const { return horizon_; }
  double step() const { return horizon_ / static_cast<double>(n_); }
  double time(std::size_t k) const { return horizon_ * static_cast<double>(k) / static_cast<double>(n_); }
  std::size_t size() const { return n_ + 1; }
  std::vector<double> times() const;

  bool operator==(const PathGrid&) const = default;

 private:
  std::size_t n_;
  double horizon_;
};

/// Values of one process on a PathGrid; values.size() == grid.n() + 1.
struct SamplePath {
  SamplePath(PathGrid g, std::vector<double> v);
  explicit SamplePath(PathGrid g) : SamplePath(g, std::vector<double>(g.size(), 0.0)) {}

  PathGrid grid;
  std::vector<double> values;

  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  std::size_t size() const { return values.size(); }
};

/// Samples f at every node of the grid.
template <class F>
SamplePath sample(const PathGrid& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.time(k));
  return SamplePath(grid, std::move(v));
}

/// Max over k in [first, size) of |a_k - b_k|; grids must match.
double max_abs_diff(const SamplePath& a, const SamplePath& b, std::size_t first = 0);

}  // namespace memvol
