#include "memvol/sde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace memvol {

Coefficients transform_coefficients(const Coefficients& coeffs, double rho, double horizon) {
  if (rho < 0.0) throw std::invalid_argument("transform_coefficients: rho must be nonnegative");
  if (rho == 0.0) return coeffs;
  Coefficients out = coeffs;
  out.drift = [b = coeffs.drift, rho](double u, double x) {
    const double g = std::exp(rho * u);
    return g * b(u, x / g);
  };
  out.diffusion = [s = coeffs.diffusion, rho](double u, double x) {
    const double g = std::exp(rho * u);
    return g * s(u, x / g);
  };
  // The inner e^{-rho u} contracts x, so the transformed Lipschitz constant
  // equals the original one; e^{rho T} is the bound stated for the map.
  const double scale = std::exp(rho * horizon);
  out.lip_drift = coeffs.lip_drift * scale;
  out.lip_diffusion = coeffs.lip_diffusion * scale;
  return out;
}

LipschitzReport check_lipschitz(const Coefficients& coeffs, double horizon, std::uint64_t seed, std::size_t samples) {
  LipschitzReport r;
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> ut(0.0, horizon);
  std::normal_distribution<double> ux(0.0, 10.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = ut(eng), x = ux(eng), y = ux(eng);
    if (x == y) continue;
    const double d = std::abs(x - y);
    r.worst_drift_ratio = std::max(r.worst_drift_ratio, std::abs(coeffs.drift(t, x) - coeffs.drift(t, y)) / d);
    r.worst_diffusion_ratio =
        std::max(r.worst_diffusion_ratio, std::abs(coeffs.diffusion(t, x) - coeffs.diffusion(t, y)) / d);
  }
  for (std::size_t k = 0; k <= 100; ++k) {
    const double t = horizon * static_cast<double>(k) / 100.0;
    r.max_at_zero = std::max(r.max_at_zero, std::abs(coeffs.drift(t, 0.0)) + std::abs(coeffs.diffusion(t, 0.0)));
  }
  constexpr double kSlack = 1e-9;
  r.ok = r.worst_drift_ratio <= coeffs.lip_drift * (1.0 + kSlack) + kSlack &&
         r.worst_diffusion_ratio <= coeffs.lip_diffusion * (1.0 + kSlack) + kSlack && std::isfinite(r.max_at_zero);
  return r;
}

MemoryProcessSpec::MemoryProcessSpec(InitialCondition xi0, Kernel kernel, CoKernel co_kernel, Coefficients coeffs,
                                     double horizon)
    : xi0_(xi0),
      kernel_(kernel),
      co_kernel_(std::move(co_kernel)),
      coeffs_(std::move(coeffs)),
      memory_coeffs_(transform_coefficients(coeffs_, kernel.rho(), horizon)),
      horizon_(horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("memory process: horizon must be positive");
  if (!coeffs_.drift || !coeffs_.diffusion) throw std::invalid_argument("memory process: coefficients are empty");
  if (!(xi0.stddev >= 0.0)) throw std::invalid_argument("memory process: xi0 stddev must be nonnegative");
  if (co_kernel_.rho != kernel_.rho()) throw std::invalid_argument("memory process: co-kernel rho differs from kernel rho");
  const std::array<double, 4> probe{0.05 * horizon, 0.3 * horizon, 0.7 * horizon, horizon};
  const double err = verify_pseudo_inverse(kernel_, co_kernel_, probe, ConvolutionMethod::kClosedForm);
  if (!(err <= 1e-9))
    throw std::invalid_argument("memory process: kernel and co-kernel are not a pseudo-inverse pair (error " +
                                std::to_string(err) + ")");
}

MemoryProcessSpec::MemoryProcessSpec(InitialCondition xi0, Kernel kernel, Coefficients coeffs, double horizon)
    : MemoryProcessSpec(xi0, kernel, memvol::co_kernel(kernel), std::move(coeffs), horizon) {}

double MemoryProcessSpec::kappa(double t) const {
  const double phi = phi_tilde(co_kernel_, t);
  return kernel_.rho() == 0.0 ? phi : std::exp(kernel_.rho() * t) * phi;
}

double memory_burst(const CoKernel& ck, double rho, double xi0, double t) {
  const double phi = phi_tilde(ck, t);
  return rho == 0.0 ? xi0 * phi : xi0 * std::exp(rho * t) * phi;
}

std::vector<double> kappa_table(const MemoryProcessSpec& spec, const PathGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.kappa(grid.time(k));
  return out;
}

void euler_xi(const MemoryProcessSpec& spec, const PathGrid& grid, std::span<const double> dW, double xi0_value,
              std::span<const double> kappa, std::span<double> out) {
  const std::size_t n = grid.n();
  if (dW.size() != n)
    throw std::invalid_argument("euler_xi: expected " + std::to_string(n) + " increments, got " +
                                std::to_string(dW.size()));
  if (out.size() != grid.size() || kappa.size() != grid.size())
    throw std::invalid_argument("euler_xi: output or kappa table size mismatch");
  const auto& mc = spec.memory_coeffs();
  const double h = grid.step();
  // Atoms give phi~(0) > 0, but xi_0 = 0 by definition: the burst enters at the first step.
  double y = 0.0;
  out[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.time(k);
    const double x = out[k];
    y += h * mc.drift(t, x) + mc.diffusion(t, x) * dW[k];
    out[k + 1] = y + xi0_value * kappa[k + 1];
  }
}

SamplePath euler_xi(const MemoryProcessSpec& spec, const PathGrid& grid, std::span<const double> dW, double xi0_value) {
  SamplePath p(grid);
  euler_xi(spec, grid, dW, xi0_value, kappa_table(spec, grid), p.values);
  return p;
}

}  // namespace memvol
