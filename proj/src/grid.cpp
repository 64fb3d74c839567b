#include "memvol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace memvol {

PathGrid::PathGrid(std::size_t n, double horizon) : n_(n), horizon_(horizon) {
  if (n == 0) throw std::invalid_argument("PathGrid: n must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("PathGrid: horizon must be positive and finite");
}

std::vector<double> PathGrid::times() const {
  std::vector<double> t(size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = time(k);
  return t;
}

SamplePath::SamplePath(PathGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("SamplePath: expected " + std::to_string(grid.size()) + " values, got " +
                                std::to_string(values.size()));
}

double max_abs_diff(const SamplePath& a, const SamplePath& b, std::size_t first) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("max_abs_diff: grid mismatch");
  double m = 0.0;
  for (std::size_t k = first; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace memvol
