#include <cmath>

#include "ldp/types_method.hpp"

namespace ldp {
namespace {

mpz_class factorial(std::uint64_t k) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), k);
  return out;
}

mpz_class power(const mpz_class& base, std::uint64_t e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

}  // namespace

double log_rational(const mpq_class& q) {
  if (sgn(q) <= 0) throw DomainError("log_rational: argument must be positive");
  auto log_z = [](const mpz_class& z) {
    long e = 0;
    const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(d) + static_cast<double>(e) * std::log(2.0);
  };
  return log_z(q.get_num()) - log_z(q.get_den());
}

mpz_class allocation_count(const QuantizedTargets& t) {
  mpz_class total = 1;
  for (std::size_t a = 0; a < t.colors(); ++a) {
    for (std::size_t b = 0; b < t.colors(); ++b) {
      total *= power(mpz_class(static_cast<unsigned long>(t.bins(a))),
                     static_cast<std::uint64_t>(t.balls(b, a)));
    }
  }
  return total;
}

mpq_class exact_type_probability(const ProfileCounts& mu_n, const QuantizedTargets& t) {
  if (!mu_n.matches(t)) return 0;
  const std::size_t m = t.colors();
  // Ways to label bins with profiles, times ways to send the labelled balls
  // to match those profiles.
  mpz_class ways = 1;
  std::vector<mpz_class> denominators(m, 1);
  for (std::size_t a = 0; a < m; ++a) ways *= factorial(static_cast<std::uint64_t>(t.bins(a)));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) ways *= factorial(static_cast<std::uint64_t>(t.balls(b, a)));
  }
  mpz_class divisor = 1;
  for (const auto& [key, count] : mu_n.counts()) {
    const auto c = static_cast<std::uint64_t>(count);
    divisor *= factorial(c);
    for (std::size_t b = 0; b < m; ++b) divisor *= power(factorial(key.profile[b]), c);
  }
  mpz_class outcomes = allocation_count(t);
  mpq_class p(ways, divisor * outcomes);
  p.canonicalize();
  return p;
}

mpq_class exact_type_probability(const NeighbourhoodMeasure& mu_n, const QuantizedTargets& t) {
  require_same_alphabet(mu_n.alphabet(), t.alphabet(), "exact_type_probability");
  return exact_type_probability(ProfileCounts::from_measure(mu_n, t.n()), t);
}

}  // namespace ldp
