#include <cmath>
#include <limits>

#include "ldp/rates.hpp"

namespace ldp {
namespace {

constexpr double kMarginalTolerance = 1e-10;
constexpr double kMeanTolerance = 1e-10;
constexpr double kProfileTail = 1e-14;

// log(e^l - 1) without overflow for large l.
double log_expm1(double l) { return l > 30.0 ? l + std::log1p(-std::exp(-l)) : std::log(std::expm1(l)); }

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

Extended rate_neighbourhood(const NeighbourhoodMeasure& mu, const SymbolMeasure& nu,
                            const PairMeasure& pi) {
  require_same_alphabet(mu.alphabet(), nu.alphabet(), "rate_neighbourhood");
  require_same_alphabet(mu.alphabet(), pi.alphabet(), "rate_neighbourhood");
  const SymbolMeasure marginal = marginal_symbol(mu);
  for (std::size_t a = 0; a < nu.alphabet().size(); ++a) {
    if (std::fabs(marginal[a] - nu[a]) > kMarginalTolerance) return Extended::infinity();
  }
  if (check_consistency(pi, mu) == Consistency::Neither) return Extended::infinity();
  return relative_entropy_log(
      mu, [&](const ProfileKey& k) { return log_poi_mass(nu, pi, k.symbol, k.profile); });
}

Extended rate_degree(const DegreeMeasure& d, double c) {
  if (!(c > 0.0)) throw DomainError("rate_degree: c must be positive");
  if (std::fabs(d.mean() - c) > kMeanTolerance) return Extended::infinity();
  return relative_entropy_log(d, [c](std::size_t k) { return log_poisson_pmf(c, k); });
}

DegreeMeasure minimizer_degree_profile(double x, double c) {
  if (!(c > 0.0)) throw DomainError("minimizer_degree_profile: c must be positive");
  if (!(x >= 1.0 - c && x < 1.0 && x >= 0.0)) {
    throw DomainError("minimizer_degree_profile: x outside [1 - c, 1)");
  }
  const double l = lambda_root(x, c).value();
  if (l == 0.0) return DegreeMeasure({x, 1.0 - x});

  std::vector<double> w{x};
  const double log_scale = std::log1p(-x) - log_expm1(l);
  const double log_l = std::log(l);
  double mass = 0.0;
  for (std::uint64_t k = 1;; ++k) {
    const auto dk = static_cast<double>(k);
    const double p = std::exp(log_scale + dk * log_l - std::lgamma(dk + 1.0));
    w.push_back(p);
    mass += p;
    if (dk >= l && (1.0 - x) - mass < kProfileTail) break;
    if (k > 100'000) throw DomainError("minimizer_degree_profile: support too large");
  }
  return DegreeMeasure(std::move(w));
}

double isolated_closed_form(double x, double c, double lambda) {
  return xlogy(x, x * std::exp(c)) + xlogy(1.0 - x, (1.0 - x) / -std::expm1(-c)) +
         c * std::log(lambda / c);
}

IsolatedRateResult rate_isolated(double x, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("rate_isolated: c must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("rate_isolated: x must lie in [0, 1]");
  IsolatedRateResult r;
  r.x = x;
  r.c = c;
  r.closed_form = std::numeric_limits<double>::quiet_NaN();
  if (x < 1.0 - c) {
    r.value = Extended::infinity();
    return r;
  }
  r.lambda = lambda_root(x, c);
  if (r.lambda->is_infinite()) {
    r.value = Extended::infinity();
    return r;
  }
  r.minimizer = minimizer_degree_profile(x, c);
  r.value = relative_entropy_log(*r.minimizer,
                                 [c](std::size_t k) { return log_poisson_pmf(c, k); });
  r.closed_form = isolated_closed_form(x, c, r.lambda->value());
  return r;
}

double bennett_h(double x) {
  if (!(x >= 0.0)) throw DomainError("bennett_h: x must be >= 0");
  return (1.0 + x) * std::log1p(x) - x;
}

double bennett_tail(double mean_var, double threshold) {
  if (!(mean_var > 0.0) || !(threshold > 0.0)) {
    throw DomainError("bennett_tail: arguments must be positive");
  }
  return std::exp(-mean_var * bennett_h(threshold / mean_var));
}

}  // namespace ldp
