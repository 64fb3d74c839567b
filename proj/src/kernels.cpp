#include "memvol/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "memvol/special.hpp"

namespace memvol {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kConstant: return "constant";
    case KernelKind::kFractional: return "fractional";
    case KernelKind::kExponential: return "exponential";
    case KernelKind::kGamma: return "gamma";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "constant") return KernelKind::kConstant;
  if (name == "fractional") return KernelKind::kFractional;
  if (name == "exponential") return KernelKind::kExponential;
  if (name == "gamma") return KernelKind::kGamma;
  throw std::invalid_argument("unknown kernel kind '" + std::string(name) + "'");
}

Kernel::Kernel(KernelKind kind, double c, double alpha, double rho)
    : kind_(kind), c_(c), alpha_(alpha), rho_(rho), inv_gamma_alpha_(1.0 / gamma_fn(alpha)) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("kernel: c must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("kernel: alpha must lie in (0, 1]");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("kernel: rho must be nonnegative");
}

Kernel Kernel::constant(double c) { return Kernel(KernelKind::kConstant, c, 1.0, 0.0); }
Kernel Kernel::fractional(double c, double alpha) { return Kernel(KernelKind::kFractional, c, alpha, 0.0); }
Kernel Kernel::exponential(double c, double rho) { return Kernel(KernelKind::kExponential, c, 1.0, rho); }
Kernel Kernel::gamma(double c, double alpha, double rho) { return Kernel(KernelKind::kGamma, c, alpha, rho); }

Kernel Kernel::make(KernelKind kind, double c, double alpha, double rho) {
  switch (kind) {
    case KernelKind::kConstant:
      if (alpha != 1.0 || rho != 0.0) throw std::invalid_argument("constant kernel requires alpha = 1, rho = 0");
      return constant(c);
    case KernelKind::kFractional:
      if (rho != 0.0) throw std::invalid_argument("fractional kernel requires rho = 0");
      return fractional(c, alpha);
    case KernelKind::kExponential:
      if (alpha != 1.0) throw std::invalid_argument("exponential kernel requires alpha = 1");
      return exponential(c, rho);
    case KernelKind::kGamma:
      return gamma(c, alpha, rho);
  }
  throw std::invalid_argument("unknown kernel kind");
}

double Kernel::operator()(double t) const {
  if (t < 0.0 || (t == 0.0 && singular()))
    throw std::domain_error("kernel evaluated at t = " + std::to_string(t) + " outside its domain");
  double v = c_;
  if (rho_ != 0.0) v *= std::exp(-rho_ * t);
  if (alpha_ != 1.0) v *= std::pow(t, alpha_ - 1.0) * inv_gamma_alpha_;
  return v;
}

double eval_kernel(const Kernel& k, double t) { return k(t); }

double Kernel::antiderivative(double t) const {
  if (t < 0.0) throw std::domain_error("kernel antiderivative needs t >= 0");
  if (t == 0.0) return 0.0;
  if (alpha_ == 1.0) return rho_ == 0.0 ? c_ * t : -c_ * std::expm1(-rho_ * t) / rho_;
  if (rho_ == 0.0) return c_ * std::pow(t, alpha_) / gamma_fn(alpha_ + 1.0);
  return c_ * std::pow(rho_, -alpha_) * gamma_p(alpha_, rho_ * t);
}

double Kernel::integral(double a, double b) const {
  if (a < 0.0 || b < a) throw std::domain_error("kernel integral needs 0 <= a <= b");
  if (alpha_ == 1.0 && rho_ == 0.0) return c_ * (b - a);
  return antiderivative(b) - antiderivative(a);
}

double Kernel::first_moment(double a, double b) const {
  if (a < 0.0 || b < a) throw std::domain_error("kernel first moment needs 0 <= a <= b");
  auto m = [this](double t) {
    if (t == 0.0) return 0.0;
    if (rho_ == 0.0) return c_ * std::pow(t, alpha_ + 1.0) * inv_gamma_alpha_ / (alpha_ + 1.0);
    if (alpha_ == 1.0) return c_ * (1.0 - std::exp(-rho_ * t) * (1.0 + rho_ * t)) / (rho_ * rho_);
    return c_ * alpha_ * std::pow(rho_, -alpha_ - 1.0) * gamma_p(alpha_ + 1.0, rho_ * t);
  };
  return m(b) - m(a);
}

double Kernel::squared_integral(double t) const {
  if (!(alpha_ > 0.5)) throw std::domain_error("kernel is not square integrable at 0 (alpha <= 1/2)");
  if (t <= 0.0) return 0.0;
  const double e = 2.0 * alpha_ - 1.0;
  const double scale = c_ * c_ * inv_gamma_alpha_ * inv_gamma_alpha_;
  if (rho_ == 0.0) return scale * std::pow(t, e) / e;
  return scale * std::pow(2.0 * rho_, -e) * lower_incomplete_gamma(e, 2.0 * rho_ * t);
}

Kernel Kernel::without_decay() const {
  if (rho_ == 0.0) return *this;
  return alpha_ == 1.0 ? constant(c_) : fractional(c_, alpha_);
}

CoKernel co_kernel(const Kernel& k) {
  CoKernel ck;
  ck.rho = k.rho();
  if (k.alpha() == 1.0) {
    // c^{-1} e^{rho u} delta_0(du) has mass 1/c since the atom sits at u = 0.
    ck.atom_weight = 1.0 / k.c();
    return ck;
  }
  ck.density = k.rho() == 0.0 ? Kernel::fractional(1.0 / k.c(), 1.0 - k.alpha())
                              : Kernel::gamma(1.0 / k.c(), 1.0 - k.alpha(), k.rho());
  return ck;
}

double laplace(const Kernel& k, double t) {
  if (!(t > 0.0)) throw std::domain_error("laplace transform needs t > 0");
  const double s = t + k.rho();
  return k.alpha() == 1.0 ? k.c() / s : k.c() * std::pow(s, -k.alpha());
}

double laplace(const CoKernel& ck, double t) {
  if (!(t > 0.0)) throw std::domain_error("laplace transform needs t > 0");
  double v = ck.atom_weight;
  if (ck.density) v += laplace(*ck.density, t);
  return v;
}

double phi_tilde(const CoKernel& ck, double t) {
  if (t < 0.0) throw std::domain_error("phi_tilde needs t >= 0");
  double v = ck.atom_weight;
  if (ck.density) v += ck.density->antiderivative(t);
  return v;
}

SamplePath convolve(const Kernel& k, const SamplePath& f, QuadratureRule rule) {
  const std::size_t n = f.grid.n();
  const double h = f.grid.step();
  // a[m] = int over lag interval [(m-1)h, mh]; b[m] = weight of the right node
  // under linear interpolation.
  std::vector<double> a(n + 1, 0.0), b(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    const double lo = static_cast<double>(m - 1) * h;
    const double hi = static_cast<double>(m) * h;
    a[m] = k.integral(lo, hi);
    if (rule == QuadratureRule::kTrapezoid) b[m] = (hi * a[m] - k.first_moment(lo, hi)) / h;
  }
  SamplePath out(f.grid);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = 0.0;
    if (rule == QuadratureRule::kRectangle) {
      for (std::size_t j = 0; j < i; ++j) acc += a[i - j] * f[j];
    } else {
      for (std::size_t j = 0; j < i; ++j) acc += (a[i - j] - b[i - j]) * f[j] + b[i - j] * f[j + 1];
    }
    out[i] = acc;
  }
  return out;
}

namespace {

// int_0^upper K(s) g(s) ds with the substitution s = v^{1/alpha}, which turns
// the s^{alpha-1} endpoint singularity into a smooth integrand.
template <class G>
double integrate_against(const Kernel& k, G&& g, double upper) {
  if (upper <= 0.0) return 0.0;
  const double a = k.alpha();
  auto integrand = [&](double v) {
    const double s = std::pow(v, 1.0 / a);
    return std::exp(-k.rho() * s) * g(s);
  };
  const double vmax = std::pow(upper, a);
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, vmax, 10, 1e-12, &err);
  return k.c() / gamma_fn(a + 1.0) * val;
}

}  // namespace

double kernel_cokernel_convolution(const Kernel& k, const CoKernel& ck, double t, ConvolutionMethod method) {
  if (!(t > 0.0)) throw std::domain_error("kernel/co-kernel convolution needs t > 0");
  double v = 0.0;
  if (ck.atom_weight != 0.0) v += ck.atom_weight * k(t);
  if (!ck.density) return v;
  const Kernel& d = *ck.density;
  if (method == ConvolutionMethod::kClosedForm && d.rho() == k.rho()) {
    // Beta identity: (K_{c1,a1,rho} * K_{c2,a2,rho})(t) = c1 c2 e^{-rho t} t^{a1+a2-1} / Gamma(a1+a2).
    const double s = k.alpha() + d.alpha();
    v += k.c() * d.c() * std::exp(-k.rho() * t) * std::pow(t, s - 1.0) / gamma_fn(s);
    return v;
  }
  const double half = 0.5 * t;
  v += integrate_against(d, [&](double s) { return k(t - s); }, half);
  v += integrate_against(k, [&](double s) { return d(t - s); }, half);
  return v;
}

double verify_pseudo_inverse(const Kernel& k, const CoKernel& ck, std::span<const double> times,
                             ConvolutionMethod method) {
  double worst = 0.0;
  for (double t : times) {
    const double err = std::abs(kernel_cokernel_convolution(k, ck, t, method) - std::exp(-ck.rho * t));
    worst = std::max(worst, err);
  }
  return worst;
}

std::optional<KernelRegularity> regularity(const Kernel& k) {
  if (k.kind() != KernelKind::kFractional || !(k.alpha() > 0.5 && k.alpha() < 1.0)) return std::nullopt;
  const double alpha = k.alpha();
  const double beta = 0.5 * (1.0 + 1.0 / (2.0 * (1.0 - alpha)));
  const double theta = alpha - 1.0 + 1.0 / (2.0 * beta);
  // int_0^inf [v^{a-1} - (1+v)^{a-1}]^{2 beta} dv, split at 1.
  const double e = 2.0 * beta * (alpha - 1.0);
  auto diff = [&](double v) { return std::pow(std::pow(v, alpha - 1.0) - std::pow(1.0 + v, alpha - 1.0), 2.0 * beta); };
  // On [0, 1] substitute v = w^{1/(e+1)} to absorb the v^e singularity.
  auto near = [&](double w) {
    if (w == 0.0) return 1.0 / (e + 1.0);
    const double v = std::pow(w, 1.0 / (e + 1.0));
    return diff(v) / std::pow(v, e) / (e + 1.0);
  };
  const double i0 = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(near, 0.0, 1.0, 15, 1e-12);
  boost::math::quadrature::exp_sinh<double> tail;
  const double i1 = tail.integrate([&](double u) { return diff(1.0 + u); });
  const double c_shift = k.c() / gamma_fn(alpha) * std::pow(i0 + i1, 1.0 / (2.0 * beta));
  return KernelRegularity{beta, theta, c_shift};
}

}  // namespace memvol
