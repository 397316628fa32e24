#pragma once

#include <optional>

#include "ldp/extended.hpp"
#include "ldp/measures.hpp"

namespace ldp {

/// H(mu || Poi) when mu_1 = nu (within 1e-10) and (pi, mu) is consistent or
/// sub-consistent; +inf otherwise.
Extended rate_neighbourhood(const NeighbourhoodMeasure& mu, const SymbolMeasure& nu,
                            const PairMeasure& pi);

/// H(d || q_c) when |<d> - c| <= 1e-10; +inf otherwise. c > 0.
Extended rate_degree(const DegreeMeasure& d, double c);

/// g(lambda) = (1 - e^{-lambda}) / lambda, with g(0) = 1.
double lambda_map(double lambda);

/// Root of g(lambda) = (1 - x) / c for x in [1 - c, 1]. Returns 0 at
/// x = 1 - c and +inf at x = 1; throws DomainError outside that range.
Extended lambda_root(double x, double c);

/// d_x(0) = x, d_x(k) = (1 - x) lambda^k / (k! (e^lambda - 1)) for k >= 1,
/// truncated once the remaining mass is below 1e-14. At lambda = 0 this is
/// the limit (1 - c) delta_0 + c delta_1. Domain 1 - c <= x < 1.
DegreeMeasure minimizer_degree_profile(double x, double c);

struct IsolatedRateResult {
  double x = 0.0;
  double c = 0.0;
  /// Unset when x < 1 - c (no root); +inf at x = 1.
  std::optional<Extended> lambda;
  /// Set whenever the value is finite.
  std::optional<DegreeMeasure> minimizer;
  Extended value;
  /// isolated_closed_form at this lambda. Diagnostic only; it disagrees
  /// with `value` away from x = e^{-c}. NaN when undefined.
  double closed_form = 0.0;
};

/// eta(x) for mean degree c > 0 and x in [0, 1], computed as H(d_x || q_c).
IsolatedRateResult rate_isolated(double x, double c);

/// x log(x e^c) + (1-x) log((1-x)/(1-e^{-c})) + c log(lambda/c).
double isolated_closed_form(double x, double c, double lambda);

/// h(x) = (1 + x) log(1 + x) - x for x >= 0.
double bennett_h(double x);

/// exp(-v h(t / v)) for v = m_n sigma_n^2 > 0 and threshold t > 0.
double bennett_tail(double mean_var, double threshold);

}  // namespace ldp
