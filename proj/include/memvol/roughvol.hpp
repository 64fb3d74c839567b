#pragma once

#include <span>

#include "memvol/grid.hpp"
#include "memvol/volterra.hpp"

namespace memvol {

/// Rough-volatility model: Y is the memory process of Z, V = a (Y - b)^2 + c drives the asset S.
struct RoughVolParams {
  double a = 0.384;
  double b = 0.095;
  double c = 0.0025;
  double lambda = 1.2;
  double mu = 2.0;
  double H = 0.1;
  double xi0 = 2.0 / 1.2;
  double r = 0.0;
  double s0 = 1.0;
  double T = 30.0;
  std::size_t n = 8192;

  /// Throws std::invalid_argument on a > 0, b, c >= 0, H in (0, 1/2), s0 > 0, T > 0, n > 0 violations.
  void validate() const;
  double alpha() const { return H + 0.5; }
  PathGrid grid() const { return PathGrid(n, T); }
};

/// sqrt(a (x - b)^2 + c).
double sigma_v(double x, const RoughVolParams& p);

enum class RoughVolScheme {
  kScheme1,  ///< frozen kernel for drift and noise
  kScheme2,  ///< integrated kernel for the drift
};

struct RoughVolPaths {
  SamplePath Y;
  SamplePath Z;
};

struct RoughVolEndpoint {
  double Y;
  double Z;
};

/// Precomputes the grid-dependent weights once; simulation calls are then pure.
class RoughVolSimulator {
 public:
  RoughVolSimulator(const RoughVolParams& p, RoughVolScheme scheme);

  const RoughVolParams& params() const { return p_; }
  RoughVolPaths paths(std::span<const double> dW) const;
  /// (Y_T, Z_T) in O(n).
  RoughVolEndpoint endpoint(std::span<const double> dW) const;

 private:
  void run_y(std::span<const double> dW, std::span<double> y, FrozenCoefficients& fc) const;

  RoughVolParams p_;
  PathGrid grid_;
  std::vector<double> kappa_;
  WeightTable weights_;
};

RoughVolPaths scheme1(const RoughVolParams& p, std::span<const double> dW);
RoughVolPaths scheme2(const RoughVolParams& p, std::span<const double> dW);

/// Log-Euler asset path driven by V_k = a (Y_k - b)^2 + c.
SamplePath simulate_asset(const RoughVolParams& p, const SamplePath& Y, std::span<const double> dW_asset);

/// The same model expressed as a generic Volterra spec (fractional kernel, b(x) = mu - lambda x, sigma = sigma_v).
VolterraSpec as_volterra(const RoughVolParams& p, RoughVolScheme scheme);

}  // namespace memvol
