#include "memvol/fracops.hpp"

#include <stdexcept>
#include <string>

namespace memvol {

FracOrder::FracOrder(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("fractional order must lie in (0, 1], got " + std::to_string(beta));
}

SamplePath frac_integral(FracOrder beta, const SamplePath& f, QuadratureRule rule) {
  return convolve(Kernel::fractional(1.0, beta.value()), f, rule);
}

SamplePath forward_difference(const SamplePath& f) {
  const std::size_t n = f.grid.n();
  if (f.size() < 2) throw std::invalid_argument("difference quotient needs at least 2 grid points");
  const double h = f.grid.step();
  SamplePath d(f.grid);
  for (std::size_t k = 0; k < n; ++k) d[k] = (f[k + 1] - f[k]) / h;
  d[n] = (f[n] - f[n - 1]) / h;
  return d;
}

SamplePath frac_derivative(FracOrder beta, const SamplePath& f, QuadratureRule rule) {
  if (beta.value() == 1.0) return forward_difference(f);
  return forward_difference(frac_integral(FracOrder(1.0 - beta.value()), f, rule));
}

}  // namespace memvol
