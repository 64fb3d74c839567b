#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "memvol/grid.hpp"

namespace memvol {

enum class KernelKind { kConstant, kFractional, kExponential, kGamma };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// Gamma-family convolution kernel K_{c,alpha,rho}(t) = c e^{-rho t} t^{alpha-1} / Gamma(alpha).
///
/// Constant (alpha = 1, rho = 0), Fractional (rho = 0), Exponential (alpha = 1)
/// and Gamma are the four named members. Instances are immutable.
class Kernel {
 public:
  static Kernel constant(double c);
  static Kernel fractional(double c, double alpha);
  static Kernel exponential(double c, double rho);
  static Kernel gamma(double c, double alpha, double rho);
  /// Validating constructor used by config parsing.
  static Kernel make(KernelKind kind, double c, double alpha, double rho);

  KernelKind kind() const { return kind_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double rho() const { return rho_; }
  /// True when K(t) -> +inf as t -> 0+.
  bool singular() const { return alpha_ < 1.0; }

  /// K(t). Throws std::domain_error for t <= 0 on a singular kernel and for t < 0.
  double operator()(double t) const;

  /// int_0^t K(u) du.
  double antiderivative(double t) const;
  /// int_a^b K(u) du, 0 <= a <= b.
  double integral(double a, double b) const;
  /// int_a^b u K(u) du, 0 <= a <= b.
  double first_moment(double a, double b) const;
  /// int_0^t K(u)^2 du; requires alpha > 1/2.
  double squared_integral(double t) const;

  /// Same shape with rho set to zero, i.e. u -> e^{rho u} K(u).
  Kernel without_decay() const;

  bool operator==(const Kernel&) const = default;

 private:
  Kernel(KernelKind kind, double c, double alpha, double rho);

  KernelKind kind_;
  double c_;
  double alpha_;
  double rho_;
  double inv_gamma_alpha_;
};

double eval_kernel(const Kernel& k, double t);

/// rho-pseudo-inverse co-kernel: a Dirac atom at 0 plus an optional density.
struct CoKernel {
  double atom_weight = 0.0;
  std::optional<Kernel> density;
  double rho = 0.0;
};

/// Table of co-kernels for the four kernel families.
CoKernel co_kernel(const Kernel& k);

/// Laplace transform L_K(t) = c (t + rho)^{-alpha}, t > 0.
double laplace(const Kernel& k, double t);
/// Laplace transform of the co-kernel measure (atom contributes its weight).
double laplace(const CoKernel& ck, double t);

/// phi~(t) = (K~ * 1)(t) = atom_weight + int_0^t density.
double phi_tilde(const CoKernel& ck, double t);

/// Interpolation of the sampled integrand between grid nodes.
enum class QuadratureRule {
  kRectangle,  ///< piecewise constant, left node value (first order)
  kTrapezoid,  ///< piecewise linear (product trapezoidal)
};

/// (K * f)(t_k) = int_0^{t_k} K(t_k - s) f(s) ds on the grid of f, using exact
/// per-interval kernel integrals against the interpolated integrand.
SamplePath convolve(const Kernel& k, const SamplePath& f, QuadratureRule rule = QuadratureRule::kRectangle);

/// Route used to evaluate (K * K~)(t).
enum class ConvolutionMethod {
  kClosedForm,  ///< Beta identity for same-rho Gamma-family pairs, atom scaling otherwise
  kQuadrature,  ///< singularity-removing substitution + adaptive Gauss-Kronrod
};

/// (K * K~)(t) for t > 0.
double kernel_cokernel_convolution(const Kernel& k, const CoKernel& ck, double t, ConvolutionMethod method);

/// max_t |(K * K~)(t) - e^{-rho t}| over the given times.
double verify_pseudo_inverse(const Kernel& k, const CoKernel& ck, std::span<const double> times,
                             ConvolutionMethod method = ConvolutionMethod::kClosedForm);

/// Integrability / shift-Holder metadata (beta, theta, C_K) of a kernel.
struct KernelRegularity {
  double beta;
  double theta;
  double c_shift;
};

/// Defined for fractional kernels with alpha in (1/2, 1); nullopt otherwise.
std::optional<KernelRegularity> regularity(const Kernel& k);

}  // namespace memvol
