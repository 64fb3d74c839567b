#pragma once

#include "memvol/grid.hpp"
#include "memvol/kernels.hpp"

namespace memvol {

/// Riemann-Liouville order in (0, 1].
class FracOrder {
 public:
  explicit FracOrder(double beta);
  double value() const { return beta_; }

 private:
  double beta_;
};

/// I^beta f on the grid of f: convolution with K_{1,beta,0}.
SamplePath frac_integral(FracOrder beta, const SamplePath& f, QuadratureRule rule = QuadratureRule::kRectangle);

/// D^beta f = d/dt I^{1-beta} f, differentiated by forward differences; the
/// last node reuses the backward difference. Node 0 is the least accurate.
SamplePath frac_derivative(FracOrder beta, const SamplePath& f, QuadratureRule rule = QuadratureRule::kRectangle);

/// Forward difference quotient (backward at the last node).
SamplePath forward_difference(const SamplePath& f);

}  // namespace memvol
