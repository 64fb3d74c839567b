#include "memvol/volterra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "memvol/fracops.hpp"

namespace memvol {

std::string_view to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::kFrozenKernel: return "frozen";
    case SchemeVariant::kSemiIntegratedDrift: return "semi-integrated";
    case SchemeVariant::kHybridDiffusion: return "hybrid";
  }
  return "unknown";
}

SchemeVariant parse_scheme_variant(std::string_view name) {
  if (name == "frozen") return SchemeVariant::kFrozenKernel;
  if (name == "semi-integrated") return SchemeVariant::kSemiIntegratedDrift;
  if (name == "hybrid") return SchemeVariant::kHybridDiffusion;
  throw std::invalid_argument("unknown scheme variant '" + std::string(name) + "'");
}

VolterraSpec::VolterraSpec(MemoryProcessSpec memory, SchemeVariant variant)
    : memory_(std::move(memory)), variant_(variant) {
  if (!(memory_.kernel().alpha() > 0.5))
    throw std::invalid_argument("volterra: kernel must be square integrable (alpha > 1/2)");
}

WeightTable::WeightTable(const Kernel& k, SchemeVariant variant, const PathGrid& grid)
    : grid_(grid), variant_(variant), drift_rev_(grid.n()), diff_rev_(grid.n()) {
  const std::size_t n = grid.n();
  const double h = grid.step();
  for (std::size_t m = 1; m <= n; ++m) {
    const double lag = static_cast<double>(m) * h;
    const double frozen = k(lag);
    diff_rev_[n - m] = frozen;
    // A flat kernel integrates to h K exactly; skip the rounding of hi - lo.
    const bool flat = k.alpha() == 1.0 && k.rho() == 0.0;
    drift_rev_[n - m] = variant == SchemeVariant::kFrozenKernel || flat
                            ? h * frozen
                            : k.integral(static_cast<double>(m - 1) * h, lag);
  }
  if (variant == SchemeVariant::kHybridDiffusion) {
    cov_recent_ = k.antiderivative(h);
    var_recent_ = k.squared_integral(h);
  }
}

namespace {

double dot(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < len; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double dot3(const double* a, const double* b, const double* c, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += a[i] * b[i] * c[i];
    s1 += a[i + 1] * b[i + 1] * c[i + 1];
    s2 += a[i + 2] * b[i + 2] * c[i + 2];
    s3 += a[i + 3] * b[i + 3] * c[i + 3];
  }
  for (; i < len; ++i) s0 += a[i] * b[i] * c[i];
  return (s0 + s1) + (s2 + s3);
}

void check_noise(const WeightTable& w, const VolterraNoise& noise) {
  const std::size_t n = w.grid().n();
  if (noise.dW.size() != n)
    throw std::invalid_argument("euler_x: expected " + std::to_string(n) + " increments, got " +
                                std::to_string(noise.dW.size()));
  if (w.variant() == SchemeVariant::kHybridDiffusion && noise.recent.size() != n)
    throw std::invalid_argument("euler_x: hybrid variant needs one recent-interval integral per step");
}

}  // namespace

std::vector<double> recent_integrals(const WeightTable& w, std::span<const double> dW, std::span<const double> normals) {
  if (w.variant() != SchemeVariant::kHybridDiffusion)
    throw std::invalid_argument("recent_integrals: weight table is not hybrid");
  if (dW.size() != normals.size()) throw std::invalid_argument("recent_integrals: size mismatch");
  const double h = w.grid().step();
  const double beta = w.cov_recent() / h;
  const double resid = std::sqrt(std::max(0.0, w.var_recent() - w.cov_recent() * beta));
  std::vector<double> out(dW.size());
  for (std::size_t i = 0; i < dW.size(); ++i) out[i] = beta * dW[i] + resid * normals[i];
  return out;
}

std::vector<double> coarse_recent_integrals(const WeightTable& fine_w, std::span<const double> fine_dW,
                                            std::span<const double> fine_recent, std::size_t n) {
  const std::size_t nf = fine_dW.size();
  if (n == 0 || nf % n != 0 || fine_recent.size() != nf || fine_w.grid().n() != nf)
    throw std::invalid_argument("coarse_recent_integrals: inconsistent sizes");
  const std::size_t m = nf / n;
  std::vector<double> out(n);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t base = l * m;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) acc += fine_w.diffusion(m - i) * fine_dW[base + i];
    out[l] = acc + fine_recent[base + m - 1];
  }
  return out;
}

void freeze_coefficients(const VolterraSpec& spec, const PathGrid& grid, std::span<const double> xi_bar,
                         FrozenCoefficients& out) {
  if (xi_bar.size() != grid.size()) throw std::invalid_argument("euler_x: xi_bar is not sampled on the scheme grid");
  const std::size_t n = grid.n();
  const double rho = spec.memory().rho();
  const auto& c = spec.memory().coeffs();
  out.drift.resize(n);
  out.diffusion.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double t = grid.time(l);
    const double x = rho == 0.0 ? xi_bar[l] : std::exp(-rho * t) * xi_bar[l];
    out.drift[l] = c.drift(t, x);
    out.diffusion[l] = c.diffusion(t, x);
  }
}

FrozenCoefficients freeze_coefficients(const VolterraSpec& spec, const PathGrid& grid, const SamplePath& xi_bar) {
  if (!(xi_bar.grid == grid)) throw std::invalid_argument("euler_x: xi_bar is not sampled on the scheme grid");
  FrozenCoefficients fc;
  freeze_coefficients(spec, grid, xi_bar.values, fc);
  return fc;
}

double euler_x_at(const WeightTable& w, const FrozenCoefficients& fc, const VolterraNoise& noise, double xi0,
                  std::size_t k) {
  const std::size_t n = w.grid().n();
  if (k > n) throw std::out_of_range("euler_x: node index out of range");
  if (k == 0) return xi0;
  const double* dr = w.drift_reversed().data() + (n - k);
  const double* df = w.diffusion_reversed().data() + (n - k);
  double x = xi0 + dot(dr, fc.drift.data(), k);
  if (w.variant() == SchemeVariant::kHybridDiffusion) {
    x += dot3(df, fc.diffusion.data(), noise.dW.data(), k - 1);
    x += fc.diffusion[k - 1] * noise.recent[k - 1];
  } else {
    x += dot3(df, fc.diffusion.data(), noise.dW.data(), k);
  }
  return x;
}

std::vector<double> euler_x_nodes(const WeightTable& w, const FrozenCoefficients& fc, const VolterraNoise& noise,
                                  double xi0, std::size_t stride) {
  check_noise(w, noise);
  const std::size_t n = w.grid().n();
  if (stride == 0 || n % stride != 0) throw std::invalid_argument("euler_x: stride must divide n");
  std::vector<double> out(n / stride + 1);
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = euler_x_at(w, fc, noise, xi0, q * stride);
  return out;
}

SamplePath euler_x(const VolterraSpec& spec, const PathGrid& grid, std::span<const double> dW,
                   const SamplePath& xi_bar, double xi0_value, std::span<const double> recent) {
  const WeightTable w(spec.kernel(), spec.variant(), grid);
  const VolterraNoise noise{dW, recent};
  check_noise(w, noise);
  const auto fc = freeze_coefficients(spec, grid, xi_bar);
  return SamplePath(grid, euler_x_nodes(w, fc, noise, xi0_value, 1));
}

double euler_x_endpoint(const VolterraSpec& spec, const WeightTable& w, std::span<const double> dW,
                        const SamplePath& xi_bar, double xi0_value, std::span<const double> recent) {
  const VolterraNoise noise{dW, recent};
  check_noise(w, noise);
  const auto fc = freeze_coefficients(spec, w.grid(), xi_bar);
  return euler_x_at(w, fc, noise, xi0_value, w.grid().n());
}

SamplePath memory_of_x(const SamplePath& x, const CoKernel& ck) {
  SamplePath out(x.grid);
  if (ck.density) out = convolve(*ck.density, x);
  if (ck.atom_weight != 0.0)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += ck.atom_weight * x[k];
  if (ck.rho != 0.0)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::exp(ck.rho * x.grid.time(k));
  return out;
}

SamplePath reconstruct_x(const SamplePath& xi, const Kernel& k) {
  SamplePath out(xi.grid);
  if (k.alpha() == 1.0) {
    // (c * xi)' = c xi exactly.
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k.c() * xi[i];
  } else {
    out = forward_difference(convolve(k.without_decay(), xi));
  }
  if (k.rho() != 0.0)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(-k.rho() * xi.grid.time(i));
  return out;
}

}  // namespace memvol
