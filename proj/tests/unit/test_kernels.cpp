#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "memvol/kernels.hpp"
#include "memvol/special.hpp"

using namespace memvol;

namespace {
constexpr double kInvGamma06 = 0.67150497244207335818;
constexpr double kInvGamma14 = 1.1270604979860276597;
}  // namespace

TEST_CASE("kernel evaluation") {
  CHECK(Kernel::constant(2.0)(5.0) == 2.0);
  CHECK(Kernel::fractional(1.0, 1.0)(0.37) == 1.0);
  CHECK(std::abs(Kernel::fractional(1.0, 0.6)(1.0) - kInvGamma06) <= 1e-15);
  CHECK(std::abs(Kernel::exponential(2.0, 0.5)(2.0) - 2.0 * std::exp(-1.0)) <= 1e-15);
  CHECK(Kernel::constant(3.0)(0.0) == 3.0);
  CHECK_THROWS_AS(Kernel::fractional(1.0, 0.6)(0.0), std::domain_error);
  CHECK_THROWS_AS(Kernel::constant(1.0)(-0.1), std::domain_error);
  CHECK(eval_kernel(Kernel::gamma(3.0, 0.7, 1.2), 0.5) == Kernel::gamma(3.0, 0.7, 1.2)(0.5));
}

TEST_CASE("kernel parameter validation") {
  CHECK_THROWS_AS(Kernel::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::fractional(1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::gamma(1.0, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::make(KernelKind::kConstant, 1.0, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::make(KernelKind::kFractional, 1.0, 0.5, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::make(KernelKind::kExponential, 1.0, 0.5, 0.3), std::invalid_argument);
  CHECK(Kernel::make(KernelKind::kGamma, 1.0, 0.5, 0.3) == Kernel::gamma(1.0, 0.5, 0.3));
  CHECK(parse_kernel_kind("exponential") == KernelKind::kExponential);
  CHECK_THROWS_AS(parse_kernel_kind("bessel"), std::invalid_argument);
}

TEST_CASE("kernels are positive and singular only below alpha = 1") {
  const std::array<Kernel, 4> ks{Kernel::constant(2.0), Kernel::fractional(1.0, 0.6), Kernel::exponential(0.8, 1.2),
                                 Kernel::gamma(3.0, 0.7, 1.2)};
  for (const auto& k : ks) {
    for (double t : {1e-6, 0.1, 1.0, 10.0}) CHECK(k(t) > 0.0);
    CHECK(k.integral(0.0, 1.0) > 0.0);
  }
  CHECK_FALSE(ks[0].singular());
  CHECK(ks[1].singular());
  CHECK(ks[1](1e-12) > 1e4);
}

TEST_CASE("kernel integrals match high-precision quadrature") {
  const Kernel g = Kernel::gamma(3.0, 0.7, 1.2);
  CHECK(std::abs(g.antiderivative(0.5) - 1.61276567163121861001821863591) <= 1e-13);
  CHECK(std::abs(g.squared_integral(0.5) - 7.5880828798144701141277323573) <= 1e-12);
  CHECK(std::abs(g.first_moment(0.2, 0.5) - 0.214217546034047295214399644112) <= 1e-14);
  const Kernel f = Kernel::fractional(2.0, 0.75);
  CHECK(std::abs(f.squared_integral(0.3) - 4.0 * std::pow(0.3, 0.5) / 0.5 / std::pow(gamma_fn(0.75), 2)) <= 1e-13);
  CHECK_THROWS_AS(Kernel::fractional(1.0, 0.4).squared_integral(1.0), std::domain_error);
  CHECK(std::abs(Kernel::exponential(2.0, 0.5).integral(1.0, 3.0) - 4.0 * (std::exp(-0.5) - std::exp(-1.5))) <= 1e-14);
}

TEST_CASE("co-kernel table") {
  const CoKernel f = co_kernel(Kernel::fractional(1.0, 0.6));
  REQUIRE(f.density);
  CHECK(*f.density == Kernel::fractional(1.0, 0.4));
  CHECK(f.atom_weight == 0.0);

  const CoKernel c = co_kernel(Kernel::constant(2.0));
  CHECK(c.atom_weight == 0.5);
  CHECK_FALSE(c.density);

  const CoKernel g = co_kernel(Kernel::gamma(3.0, 0.7, 1.2));
  REQUIRE(g.density);
  CHECK(g.density->c() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g.density->alpha() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(g.density->rho() == 1.2);
  CHECK(g.rho == 1.2);

  const CoKernel e = co_kernel(Kernel::exponential(4.0, 0.9));
  CHECK(e.atom_weight == 0.25);
  CHECK(e.rho == 0.9);
}

TEST_CASE("co-kernel of the co-kernel density returns the kernel") {
  for (double alpha : {0.2, 0.55, 0.9}) {
    const Kernel k = Kernel::fractional(2.5, alpha);
    const CoKernel back = co_kernel(*co_kernel(k).density);
    REQUIRE(back.density);
    CHECK(back.density->c() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(back.density->alpha() == doctest::Approx(alpha).epsilon(1e-15));
  }
}

TEST_CASE("Laplace transforms") {
  CHECK(laplace(Kernel::gamma(1.0, 0.5, 1.0), 3.0) == 0.5);
  CHECK(laplace(Kernel::constant(2.0), 4.0) == 0.5);
  CHECK_THROWS_AS(laplace(Kernel::constant(2.0), 0.0), std::domain_error);
  const Kernel g = Kernel::gamma(3.0, 0.7, 1.2);
  for (double t : {1e-3, 0.5, 7.0, 1e3})
    CHECK(std::abs(laplace(g, t) * laplace(co_kernel(g), t) - 1.0 / (t + 1.2)) <= 1e-12 / (t + 1.2));
}

TEST_CASE("phi_tilde") {
  CHECK(std::abs(phi_tilde(co_kernel(Kernel::fractional(1.0, 0.6)), 1.0) - kInvGamma14) <= 1e-15);
  CHECK(phi_tilde(co_kernel(Kernel::fractional(1.0, 0.6)), 0.0) == 0.0);
  CHECK(phi_tilde(co_kernel(Kernel::constant(2.0)), 3.3) == 0.5);
  CHECK_THROWS_AS(phi_tilde(co_kernel(Kernel::constant(2.0)), -1.0), std::domain_error);
}

TEST_CASE("phi_tilde is non-decreasing and concave for pure densities") {
  for (const Kernel& k : {Kernel::fractional(1.3, 0.35), Kernel::gamma(0.7, 0.6, 2.0)}) {
    const CoKernel ck = co_kernel(k);
    const PathGrid g(200, 3.0);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      const double a = phi_tilde(ck, g.time(i - 1)), b = phi_tilde(ck, g.time(i)), c = phi_tilde(ck, g.time(i + 1));
      CHECK(b >= a);
      CHECK(c - 2.0 * b + a <= 1e-15);
    }
  }
}

TEST_CASE("convolution on grids") {
  const PathGrid g(50, 2.0);
  const SamplePath one = sample(g, [](double) { return 1.0; });
  CHECK(max_abs_diff(convolve(Kernel::constant(3.0), one), sample(g, [](double t) { return 3.0 * t; })) <= 1e-14);

  // K * phi~' : with f = 1 the convolution is the antiderivative exactly.
  const Kernel f = Kernel::fractional(1.0, 0.3);
  CHECK(max_abs_diff(convolve(f, one), sample(g, [&](double t) { return f.antiderivative(t); })) <= 1e-14);

  // Beta identity through the grid: K * phi~ = t when (K, K~) is a rho = 0 pair.
  const Kernel k = Kernel::fractional(1.0, 0.6);
  const SamplePath phi = sample(g, [&](double t) { return phi_tilde(co_kernel(k), t); });
  const SamplePath kt = convolve(k, phi, QuadratureRule::kTrapezoid);
  CHECK(max_abs_diff(kt, sample(g, [](double t) { return t; })) <= 2e-2);
}

TEST_CASE("convolution is linear and positivity preserving") {
  const PathGrid g(64, 1.0);
  const SamplePath a = sample(g, [](double t) { return std::sin(3.0 * t); });
  const SamplePath b = sample(g, [](double t) { return t * t; });
  SamplePath mix(g);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * a[i] - 0.5 * b[i];
  for (auto rule : {QuadratureRule::kRectangle, QuadratureRule::kTrapezoid}) {
    const Kernel k = Kernel::gamma(1.0, 0.45, 0.3);
    const SamplePath lhs = convolve(k, mix, rule);
    const SamplePath ca = convolve(k, a, rule), cb = convolve(k, b, rule);
    for (std::size_t i = 0; i < mix.size(); ++i) CHECK(lhs[i] == doctest::Approx(2.0 * ca[i] - 0.5 * cb[i]).epsilon(1e-13));
    const SamplePath pos = convolve(k, b, rule);
    for (double v : pos.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("pseudo-inverse identity") {
  const std::array<double, 5> ts{0.01, 0.3, 1.0, 2.0, 5.0};
  const Kernel c = Kernel::constant(4.0);
  CHECK(verify_pseudo_inverse(c, co_kernel(c), ts) == 0.0);
  CHECK(verify_pseudo_inverse(c, co_kernel(c), ts, ConvolutionMethod::kQuadrature) == 0.0);
  const Kernel e = Kernel::exponential(2.0, 0.7);
  CHECK(verify_pseudo_inverse(e, co_kernel(e), ts) <= 1e-16);
  for (double alpha : {0.55, 0.6, 0.9}) {
    const Kernel k = Kernel::fractional(1.0, alpha);
    CHECK(verify_pseudo_inverse(k, co_kernel(k), ts, ConvolutionMethod::kQuadrature) <= 1e-10);
  }
  const Kernel g = Kernel::gamma(3.0, 0.7, 1.2);
  CHECK(std::abs(kernel_cokernel_convolution(g, co_kernel(g), 2.0, ConvolutionMethod::kQuadrature) -
                 0.090717953289412503) <= 1e-10);
  CHECK(verify_pseudo_inverse(g, co_kernel(g), ts, ConvolutionMethod::kQuadrature) <= 1e-6);
  // A mismatched pair is detected.
  CHECK(verify_pseudo_inverse(g, co_kernel(Kernel::gamma(3.0, 0.7, 0.5)), ts, ConvolutionMethod::kQuadrature) > 1e-3);
}

TEST_CASE("regularity metadata for fractional kernels") {
  const auto r = regularity(Kernel::fractional(1.0, 0.6));
  REQUIRE(r);
  CHECK(r->beta == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(r->theta == doctest::Approx(0.0444444444444444444).epsilon(1e-13));
  CHECK(std::abs(r->c_shift - 1.60259884098394977920) <= 1e-9);
  const auto r2 = regularity(Kernel::fractional(2.0, 0.8));
  REQUIRE(r2);
  CHECK(r2->beta > 1.0);
  CHECK(r2->beta < 1.0 / (2.0 * (1.0 - 0.8)));
  CHECK(r2->theta > 0.0);
  CHECK(r2->theta < 1.0);
  CHECK_FALSE(regularity(Kernel::fractional(1.0, 0.4)));
  CHECK_FALSE(regularity(Kernel::constant(1.0)));
  CHECK_FALSE(regularity(Kernel::gamma(1.0, 0.6, 1.0)));
}
