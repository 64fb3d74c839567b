#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "memvol/grid.hpp"
#include "memvol/kernels.hpp"

namespace memvol {

using CoefficientFn = std::function<double(double t, double x)>;

/// Drift/diffusion pair with Holder-Lipschitz metadata.
struct Coefficients {
  CoefficientFn drift;
  CoefficientFn diffusion;
  double gamma = 1.0;  ///< time-Holder exponent in (0, 1]
  double lip_drift = 0.0;
  double lip_diffusion = 0.0;
};

/// b~(u, x) = e^{rho u} b(u, e^{-rho u} x), same for sigma; Lipschitz constants scale by e^{rho T}.
Coefficients transform_coefficients(const Coefficients& coeffs, double rho, double horizon);

struct LipschitzReport {
  double worst_drift_ratio = 0.0;      ///< max |b(t,x)-b(t,y)| / |x-y| seen
  double worst_diffusion_ratio = 0.0;  ///< same for sigma
  double max_at_zero = 0.0;            ///< max_t |b(t,0)| + |sigma(t,0)| on the time grid
  bool ok = true;                      ///< ratios within the declared constants (plus slack)
};

/// Spot-checks the declared Lipschitz constants on random triples (t, x, y).
LipschitzReport check_lipschitz(const Coefficients& coeffs, double horizon, std::uint64_t seed,
                                std::size_t samples = 1000);

/// Law of xi^0: a point mass (stddev = 0) or a Gaussian.
struct InitialCondition {
  double mean = 0.0;
  double stddev = 0.0;

  /// Maps a standard normal draw to a sample of xi^0.
  double from_normal(double z) const { return mean + stddev * z; }
};

/// The Markovian memory process xi together with the kernel pair it came from.
class MemoryProcessSpec {
 public:
  /// Validates T > 0 and that (kernel, co_kernel) is a pseudo-inverse pair.
  MemoryProcessSpec(InitialCondition xi0, Kernel kernel, CoKernel co_kernel, Coefficients coeffs, double horizon);
  /// Uses the tabulated co-kernel of `kernel`.
  MemoryProcessSpec(InitialCondition xi0, Kernel kernel, Coefficients coeffs, double horizon);

  const InitialCondition& xi0() const { return xi0_; }
  const Kernel& kernel() const { return kernel_; }
  const CoKernel& co_kernel() const { return co_kernel_; }
  double rho() const { return kernel_.rho(); }
  /// Coefficients (b, sigma) of the Volterra equation.
  const Coefficients& coeffs() const { return coeffs_; }
  /// Coefficients (b~, sigma~) driving xi.
  const Coefficients& memory_coeffs() const { return memory_coeffs_; }
  double horizon() const { return horizon_; }

  /// kappa~(t) = e^{rho t} phi~(t).
  double kappa(double t) const;

 private:
  InitialCondition xi0_;
  Kernel kernel_;
  CoKernel co_kernel_;
  Coefficients coeffs_;
  Coefficients memory_coeffs_;
  double horizon_;
};

/// xi^0 e^{rho t} phi~(t): the deterministic memory burst.
double memory_burst(const CoKernel& ck, double rho, double xi0, double t);

/// Euler scheme for xi on `grid` driven by the n increments dW:
///   xi_{k+1} - xi_k = xi^0 (kappa(t_{k+1}) - kappa(t_k)) + h b~(t_k, xi_k) + sigma~(t_k, xi_k) dW_k,
/// evaluated in lifted form xi_k = Y_k + xi^0 kappa(t_k) with kappa taken in closed form per node.
SamplePath euler_xi(const MemoryProcessSpec& spec, const PathGrid& grid, std::span<const double> dW, double xi0_value);

/// kappa~(t_k) for every node, reusable across paths on the same grid.
std::vector<double> kappa_table(const MemoryProcessSpec& spec, const PathGrid& grid);

/// Allocation-free variant with a precomputed kappa table; out.size() == grid.size().
void euler_xi(const MemoryProcessSpec& spec, const PathGrid& grid, std::span<const double> dW, double xi0_value,
              std::span<const double> kappa, std::span<double> out);

}  // namespace memvol
