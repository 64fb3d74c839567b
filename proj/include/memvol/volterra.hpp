#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "memvol/grid.hpp"
#include "memvol/kernels.hpp"
#include "memvol/sde.hpp"

namespace memvol {

enum class SchemeVariant {
  kFrozenKernel,         ///< kernel sampled at grid lags for drift and diffusion
  kSemiIntegratedDrift,  ///< exact per-interval kernel integrals for the drift
  kHybridDiffusion,      ///< as above, plus an exact Wiener integral on the most recent interval
};

std::string_view to_string(SchemeVariant v);
SchemeVariant parse_scheme_variant(std::string_view name);

/// The path-dependent Volterra process X driven by a memory-process spec.
class VolterraSpec {
 public:
  /// Requires a square-integrable kernel (alpha > 1/2).
  VolterraSpec(MemoryProcessSpec memory, SchemeVariant variant);

  const MemoryProcessSpec& memory() const { return memory_; }
  const Kernel& kernel() const { return memory_.kernel(); }
  SchemeVariant variant() const { return variant_; }

 private:
  MemoryProcessSpec memory_;
  SchemeVariant variant_;
};

/// Lag weights of one (kernel, variant, grid), shared read-only across paths.
///
/// Stored reversed so that the sum for node k is a contiguous dot product.
class WeightTable {
 public:
  WeightTable(const Kernel& k, SchemeVariant variant, const PathGrid& grid);

  const PathGrid& grid() const { return grid_; }
  SchemeVariant variant() const { return variant_; }
  /// Weight on b_l in X_k, lag m = k - l >= 1.
  double drift(std::size_t m) const { return drift_rev_[grid_.n() - m]; }
  /// Weight on sigma_l dW_l in X_k, lag m >= 1.
  double diffusion(std::size_t m) const { return diff_rev_[grid_.n() - m]; }

  /// Covariance of (dW, int_0^h K(h - s) dW_s) on one step; hybrid only.
  double cov_recent() const { return cov_recent_; }
  double var_recent() const { return var_recent_; }

  std::span<const double> drift_reversed() const { return drift_rev_; }
  std::span<const double> diffusion_reversed() const { return diff_rev_; }

 private:
  PathGrid grid_;
  SchemeVariant variant_;
  std::vector<double> drift_rev_;
  std::vector<double> diff_rev_;
  double cov_recent_ = 0.0;
  double var_recent_ = 0.0;
};

/// Per-path driving noise on one grid.
struct VolterraNoise {
  std::span<const double> dW;      ///< n Brownian increments
  std::span<const double> recent;  ///< n recent-interval Wiener integrals (hybrid only)
};

/// Exact recent-interval integrals on a single grid from dW and independent normals.
std::vector<double> recent_integrals(const WeightTable& w, std::span<const double> dW, std::span<const double> normals);

/// Recent-interval integrals on a coarse grid of n steps, built from fine-grid
/// noise so that coarse and fine runs see the same Wiener integrals.
/// Fine steps inside a coarse interval use the frozen kernel, the last fine
/// step uses its exact integral.
std::vector<double> coarse_recent_integrals(const WeightTable& fine_w, std::span<const double> fine_dW,
                                            std::span<const double> fine_recent, std::size_t n);

/// Coefficient values along xi_bar: b_l and sigma_l evaluated at (t_l, e^{-rho t_l} xi_l), l < n.
struct FrozenCoefficients {
  std::vector<double> drift;
  std::vector<double> diffusion;
};
FrozenCoefficients freeze_coefficients(const VolterraSpec& spec, const PathGrid& grid, const SamplePath& xi_bar);
void freeze_coefficients(const VolterraSpec& spec, const PathGrid& grid, std::span<const double> xi_bar,
                         FrozenCoefficients& out);

/// X at node k, O(k).
double euler_x_at(const WeightTable& w, const FrozenCoefficients& fc, const VolterraNoise& noise, double xi0,
                  std::size_t k);

/// X at every stride-th node, O(n^2 / stride).
std::vector<double> euler_x_nodes(const WeightTable& w, const FrozenCoefficients& fc, const VolterraNoise& noise,
                                  double xi0, std::size_t stride);

/// Whole path of the X scheme started at xi0_value. `recent` must be supplied for the hybrid variant.
SamplePath euler_x(const VolterraSpec& spec, const PathGrid& grid, std::span<const double> dW,
                   const SamplePath& xi_bar, double xi0_value, std::span<const double> recent = {});

/// Endpoint X_T only, O(n) given xi_bar.
double euler_x_endpoint(const VolterraSpec& spec, const WeightTable& w, std::span<const double> dW,
                        const SamplePath& xi_bar, double xi0_value, std::span<const double> recent = {});

/// xi_t = e^{rho t} (K~ * x)_t on the grid of x.
SamplePath memory_of_x(const SamplePath& x, const CoKernel& ck);

/// X_t = e^{-rho t} d/dt ((e^{rho .} K) * xi)_t. Exact for alpha = 1 kernels;
/// otherwise a forward difference, least accurate at the first node.
SamplePath reconstruct_x(const SamplePath& xi, const Kernel& k);

}  // namespace memvol
