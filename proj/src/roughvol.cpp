#include "memvol/roughvol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memvol {

void RoughVolParams::validate() const {
  if (!(a > 0.0)) throw std::invalid_argument("roughvol: a must be positive");
  if (!(b >= 0.0) || !(c >= 0.0)) throw std::invalid_argument("roughvol: b and c must be nonnegative");
  if (!(H > 0.0 && H < 0.5)) throw std::invalid_argument("roughvol: H must lie in (0, 1/2)");
  if (!(r >= 0.0)) throw std::invalid_argument("roughvol: r must be nonnegative");
  if (!(s0 > 0.0)) throw std::invalid_argument("roughvol: s0 must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("roughvol: T must be positive");
  if (n == 0) throw std::invalid_argument("roughvol: n must be positive");
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(xi0))
    throw std::invalid_argument("roughvol: lambda, mu and xi0 must be finite");
}

double sigma_v(double x, const RoughVolParams& p) {
  const double d = x - p.b;
  return std::sqrt(p.a * d * d + p.c);
}

VolterraSpec as_volterra(const RoughVolParams& p, RoughVolScheme scheme) {
  Coefficients coeffs;
  coeffs.drift = [mu = p.mu, lambda = p.lambda](double, double x) { return mu - lambda * x; };
  coeffs.diffusion = [p](double, double x) { return sigma_v(x, p); };
  coeffs.gamma = 1.0;
  coeffs.lip_drift = std::abs(p.lambda);
  coeffs.lip_diffusion = std::sqrt(p.a);
  MemoryProcessSpec memory(InitialCondition{p.xi0, 0.0}, Kernel::fractional(1.0, p.alpha()), std::move(coeffs), p.T);
  return VolterraSpec(std::move(memory), scheme == RoughVolScheme::kScheme1 ? SchemeVariant::kFrozenKernel
                                                                            : SchemeVariant::kSemiIntegratedDrift);
}

RoughVolSimulator::RoughVolSimulator(const RoughVolParams& p, RoughVolScheme scheme)
    : p_((p.validate(), p)),
      grid_(p.grid()),
      kappa_(grid_.size()),
      weights_(Kernel::fractional(1.0, p.alpha()),
               scheme == RoughVolScheme::kScheme1 ? SchemeVariant::kFrozenKernel : SchemeVariant::kSemiIntegratedDrift,
               grid_) {
  // Memory burst t^{1/2-H} / Gamma(3/2-H).
  const CoKernel ck = co_kernel(Kernel::fractional(1.0, p.alpha()));
  for (std::size_t k = 0; k < kappa_.size(); ++k) kappa_[k] = phi_tilde(ck, grid_.time(k));
}

void RoughVolSimulator::run_y(std::span<const double> dW, std::span<double> y, FrozenCoefficients& fc) const {
  const std::size_t n = grid_.n();
  if (dW.size() != n)
    throw std::invalid_argument("roughvol: expected " + std::to_string(n) + " increments, got " +
                                std::to_string(dW.size()));
  const double h = grid_.step();
  fc.drift.resize(n);
  fc.diffusion.resize(n);
  double stoch = 0.0;
  y[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double drift = p_.mu - p_.lambda * y[k];
    const double vol = sigma_v(y[k], p_);
    fc.drift[k] = drift;
    fc.diffusion[k] = vol;
    stoch += h * drift + vol * dW[k];
    y[k + 1] = stoch + p_.xi0 * kappa_[k + 1];
  }
}

RoughVolPaths RoughVolSimulator::paths(std::span<const double> dW) const {
  RoughVolPaths out{SamplePath(grid_), SamplePath(grid_)};
  FrozenCoefficients fc;
  run_y(dW, out.Y.values, fc);
  out.Z.values = euler_x_nodes(weights_, fc, VolterraNoise{dW, {}}, p_.xi0, 1);
  return out;
}

RoughVolEndpoint RoughVolSimulator::endpoint(std::span<const double> dW) const {
  std::vector<double> y(grid_.size());
  FrozenCoefficients fc;
  run_y(dW, y, fc);
  return {y.back(), euler_x_at(weights_, fc, VolterraNoise{dW, {}}, p_.xi0, grid_.n())};
}

RoughVolPaths scheme1(const RoughVolParams& p, std::span<const double> dW) {
  return RoughVolSimulator(p, RoughVolScheme::kScheme1).paths(dW);
}

RoughVolPaths scheme2(const RoughVolParams& p, std::span<const double> dW) {
  return RoughVolSimulator(p, RoughVolScheme::kScheme2).paths(dW);
}

SamplePath simulate_asset(const RoughVolParams& p, const SamplePath& Y, std::span<const double> dW_asset) {
  const std::size_t n = Y.grid.n();
  if (dW_asset.size() != n) throw std::invalid_argument("simulate_asset: increment count does not match the grid");
  const double h = Y.grid.step();
  SamplePath S(Y.grid);
  // log S_k = log s0 + r t_k + M_k keeps the deterministic part exact when V = 0.
  double m = 0.0;
  S[0] = p.s0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = Y[k] - p.b;
    const double v = p.a * d * d + p.c;
    m += -0.5 * v * h + std::sqrt(v) * dW_asset[k];
    S[k + 1] = p.s0 * std::exp(p.r * Y.grid.time(k + 1) + m);
  }
  return S;
}

}  // namespace memvol
