#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "memvol/sde.hpp"
#include "memvol/special.hpp"

using namespace memvol;

namespace {

Coefficients constant_coefficients(double b, double s) {
  Coefficients c;
  c.drift = [b](double, double) { return b; };
  c.diffusion = [s](double, double) { return s; };
  return c;
}

std::vector<double> wiggle(std::size_t n, double scale) {
  std::vector<double> dW(n);
  for (std::size_t k = 0; k < n; ++k) dW[k] = scale * std::sin(1.7 * double(k) + 0.3);
  return dW;
}

}  // namespace

TEST_CASE("coefficient transform") {
  Coefficients c = constant_coefficients(0.7, 0.0);
  c.diffusion = [](double, double x) { return x; };
  c.lip_drift = 0.0;
  c.lip_diffusion = 1.0;
  const Coefficients t = transform_coefficients(c, 0.8, 2.0);
  for (double u : {0.0, 0.5, 1.9}) {
    CHECK(t.drift(u, 3.0) == doctest::Approx(std::exp(0.8 * u) * 0.7).epsilon(1e-15));
    CHECK(t.diffusion(u, -2.5) == doctest::Approx(-2.5).epsilon(1e-15));
  }
  CHECK(t.lip_diffusion == doctest::Approx(std::exp(1.6)).epsilon(1e-15));
  const Coefficients same = transform_coefficients(c, 0.0, 2.0);
  CHECK(same.drift(0.4, 1.0) == 0.7);
  CHECK_THROWS_AS(transform_coefficients(c, -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("Lipschitz spot-check") {
  Coefficients c;
  c.drift = [](double, double x) { return 2.0 - 1.2 * x; };
  c.diffusion = [](double, double x) { return std::sqrt(0.384 * (x - 0.095) * (x - 0.095) + 0.0025); };
  c.lip_drift = 1.2;
  c.lip_diffusion = std::sqrt(0.384);
  const auto ok = check_lipschitz(c, 1.0, 42);
  CHECK(ok.ok);
  CHECK(ok.worst_drift_ratio == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(ok.worst_diffusion_ratio <= std::sqrt(0.384));
  c.lip_diffusion = 0.1;
  CHECK_FALSE(check_lipschitz(c, 1.0, 42).ok);
}

TEST_CASE("memory process validation") {
  const Coefficients c = constant_coefficients(0.0, 0.0);
  const Kernel k = Kernel::gamma(1.0, 0.6, 0.5);
  CHECK_NOTHROW(MemoryProcessSpec({1.0, 0.0}, k, c, 1.0));
  CHECK_THROWS_AS(MemoryProcessSpec({1.0, 0.0}, k, c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(MemoryProcessSpec({1.0, 0.0}, k, co_kernel(Kernel::gamma(1.0, 0.6, 0.9)), c, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(MemoryProcessSpec({1.0, 0.0}, k, co_kernel(Kernel::gamma(2.0, 0.6, 0.5)), c, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(MemoryProcessSpec({1.0, -1.0}, k, c, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MemoryProcessSpec({1.0, 0.0}, k, Coefficients{}, 1.0), std::invalid_argument);
  CHECK(InitialCondition{1.5, 0.2}.from_normal(-1.0) == doctest::Approx(1.3));
}

TEST_CASE("memory burst") {
  const CoKernel ck = co_kernel(Kernel::fractional(1.0, 0.6));
  CHECK(memory_burst(ck, 0.0, 1.0, 1.0) == doctest::Approx(1.1270604979860276597).epsilon(1e-15));
  CHECK(memory_burst(ck, 0.0, 1.0, 0.0) == 0.0);
  const CoKernel g = co_kernel(Kernel::gamma(1.0, 0.6, 0.7));
  CHECK(memory_burst(g, 0.7, 2.0, 1.3) == doctest::Approx(2.0 * std::exp(0.91) * phi_tilde(g, 1.3)).epsilon(1e-15));
  // xi0 t^{1-alpha} / Gamma(2-alpha)
  CHECK(memory_burst(ck, 0.0, 3.0, 2.0) == doctest::Approx(3.0 * std::pow(2.0, 0.4) / gamma_fn(1.4)).epsilon(1e-14));
}

TEST_CASE("Euler scheme collapses to the burst without coefficients") {
  const PathGrid g(100, 2.0);
  const auto dW = wiggle(g.n(), 0.2);
  for (const Kernel& k : {Kernel::fractional(1.0, 0.6), Kernel::gamma(2.0, 0.7, 1.1)}) {
    const MemoryProcessSpec spec({1.7, 0.0}, k, constant_coefficients(0.0, 0.0), g.horizon());
    const SamplePath xi = euler_xi(spec, g, dW, 1.7);
    for (std::size_t i = 0; i < xi.size(); ++i) CHECK(xi[i] == 1.7 * spec.kappa(g.time(i)));
  }
  // With an atom the burst appears after the first step; xi_0 stays 0.
  const MemoryProcessSpec atom({2.0, 0.0}, Kernel::exponential(4.0, 0.5), constant_coefficients(0.0, 0.0), 2.0);
  const SamplePath xa = euler_xi(atom, g, dW, 2.0);
  CHECK(xa[0] == 0.0);
  for (std::size_t i = 1; i < xa.size(); ++i) CHECK(xa[i] == doctest::Approx(0.5 * std::exp(0.5 * g.time(i))).epsilon(1e-15));
}

TEST_CASE("Euler scheme with constant drift is exact") {
  const PathGrid g(64, 1.0);
  const MemoryProcessSpec spec({0.0, 0.0}, Kernel::fractional(1.0, 0.3), constant_coefficients(0.8, 0.0), 1.0);
  const SamplePath xi = euler_xi(spec, g, wiggle(64, 1.0), 0.0);
  CHECK(max_abs_diff(xi, sample(g, [](double t) { return 0.8 * t; })) <= 1e-15);
  CHECK_THROWS_AS(euler_xi(spec, g, wiggle(63, 1.0), 0.0), std::invalid_argument);
}

TEST_CASE("initial-value dependence in the linear deterministic case") {
  // sigma = 0, b = mu - lambda x: xi - xi' = (xi0 - xi0') D_k with
  // D_{k+1} = (1 - lambda h) D_k + kappa_{k+1} - kappa_k.
  const PathGrid g(200, 3.0);
  const double lambda = 1.2, h = g.step();
  Coefficients c;
  c.drift = [lambda](double, double x) { return 2.0 - lambda * x; };
  c.diffusion = [](double, double) { return 0.0; };
  const MemoryProcessSpec spec({1.0, 0.0}, Kernel::fractional(1.0, 0.6), c, g.horizon());
  const auto dW = wiggle(g.n(), 0.1);
  const SamplePath a = euler_xi(spec, g, dW, 1.5), b = euler_xi(spec, g, dW, 1.0);
  double d = 0.0;
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    d = (1.0 - lambda * h) * d + spec.kappa(g.time(k + 1)) - spec.kappa(g.time(k));
    CHECK(a[k + 1] - b[k + 1] == doctest::Approx(0.5 * d).epsilon(1e-10));
    CHECK(a[k + 1] > b[k + 1]);
  }
}

TEST_CASE("kappa table matches pointwise evaluation") {
  const PathGrid g(32, 1.0);
  const MemoryProcessSpec spec({1.0, 0.0}, Kernel::gamma(1.0, 0.8, 2.0), constant_coefficients(0.0, 0.0), 1.0);
  const auto table = kappa_table(spec, g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(table[k] == spec.kappa(g.time(k)));
  std::vector<double> out(g.size());
  CHECK_THROWS_AS(euler_xi(spec, g, wiggle(32, 1.0), 1.0, std::vector<double>(5), out), std::invalid_argument);
}
