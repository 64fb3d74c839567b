#include "memvol/special.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace memvol {

double gamma_fn(double x) { return std::tgamma(x); }

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("lower_incomplete_gamma: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::tgamma_lower(a, x);
}

}  // namespace memvol
