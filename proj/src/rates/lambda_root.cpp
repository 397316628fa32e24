#include <cmath>
#include <string>

#include "ldp/rates.hpp"

namespace ldp {
namespace {

// g'(lambda) = ((1 + lambda) e^{-lambda} - 1) / lambda^2.
double lambda_map_derivative(double l) {
  if (l < 1e-2) {
    return -0.5 + l / 3.0 - l * l / 8.0 + l * l * l / 30.0 - l * l * l * l / 144.0;
  }
  return ((1.0 + l) * std::exp(-l) - 1.0) / (l * l);
}

}  // namespace

double lambda_map(double l) {
  if (l == 0.0) return 1.0;
  return -std::expm1(-l) / l;
}

Extended lambda_root(double x, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("lambda_root: c must be positive");
  if (!(x >= 1.0 - c && x <= 1.0)) {
    throw DomainError("lambda_root: x = " + std::to_string(x) + " outside [1 - c, 1] for c = " +
                      std::to_string(c));
  }
  if (x == 1.0) return Extended::infinity();
  const double target = (1.0 - x) / c;
  if (target >= 1.0) return 0.0;

  // g is strictly decreasing with g(0) = 1 and g(l) < 1/l, so the root lies
  // in [0, 1/target]. Newton steps that leave the bracket fall back to bisection.
  double lo = 0.0;
  double hi = 1.0 / target;
  double l = std::min(hi, 2.0 * (1.0 - target) / target + 1e-3);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = lambda_map(l) - target;
    if (f == 0.0) return l;
    if (f > 0.0) {
      lo = l;
    } else {
      hi = l;
    }
    double next = l - f / lambda_map_derivative(l);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - l) <= 1e-16 * std::max(1.0, l)) return next;
    l = next;
  }
  return l;
}

}  // namespace ldp
