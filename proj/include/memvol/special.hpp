#pragma once

// Special functions shared by every module. All Gamma-function evaluations in
// the library go through gamma_fn so that kernel levels stay consistent.

namespace memvol {

/// Gamma function, relative error below 1e-13 on (0, 10].
double gamma_fn(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Lower incomplete gamma integral  int_0^x u^{a-1} e^{-u} du  (unregularized).
double lower_incomplete_gamma(double a, double x);

}  // namespace memvol
