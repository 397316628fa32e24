#include <cmath>
#include <numbers>

#include "ldp/types_method.hpp"

namespace ldp {
namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double log_nonzero(double x, const std::string& what) {
  if (!(x > 0.0)) throw DomainError("log of zero mass at " + what);
  return std::log(x);
}

std::string pair_name(const Alphabet& al, std::size_t b, std::size_t a) {
  return "pi_n(" + al.symbol(b) + "," + al.symbol(a) + ")";
}

}  // namespace

double relative_entropy_to_poisson(const ProfileCounts& mu_n, const QuantizedTargets& t) {
  require_same_alphabet(mu_n.alphabet(), t.alphabet(), "relative_entropy_to_poisson");
  const SymbolMeasure nu = t.nu();
  const PairMeasure pi = t.pi();
  return relative_entropy_log(mu_n.measure(), [&](const ProfileKey& k) {
           return log_poi_mass(nu, pi, k.symbol, k.profile);
         })
      .to_double();
}

double EntropyIdentity::difference() const { return std::fabs(rearranged - direct); }

EntropyIdentity entropy_identity(const ProfileCounts& mu_n, const QuantizedTargets& t) {
  if (!mu_n.matches(t)) throw DomainError("entropy_identity: Delta(mu_n) != (nu_n, pi_n)");
  const std::size_t m = t.colors();
  const auto dn = static_cast<double>(t.n());
  const SymbolMeasure nu = t.nu();
  const PairMeasure pi = t.pi();

  double h_nu = 0.0;
  for (std::size_t a = 0; a < m; ++a) h_nu -= xlogx(nu[a]);
  double h_mu = 0.0;
  double log_factorials = 0.0;
  for (const auto& [key, c] : mu_n.counts()) {
    const double w = static_cast<double>(c) / dn;
    h_mu -= xlogx(w);
    for (std::size_t b = 0; b < m; ++b) {
      log_factorials += w * std::lgamma(static_cast<double>(key.profile[b]) + 1.0);
    }
  }
  // The pi terms are taken entrywise over (b, a).
  double pair_terms = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const double p = pi(b, a);
      if (p == 0.0) continue;
      pair_terms += xlogx(p) - p - p * std::log(nu[a]);
    }
  }
  return EntropyIdentity{h_nu - h_mu - pair_terms + log_factorials,
                         relative_entropy_to_poisson(mu_n, t)};
}

double entropy_identity_check(const ProfileCounts& mu_n, const QuantizedTargets& t) {
  return entropy_identity(mu_n, t).difference();
}

CorrectionTerms stirling_corrections(const ProfileCounts& mu_n, const QuantizedTargets& t,
                                     std::size_t type_class_size) {
  if (type_class_size == 0) throw DomainError("stirling_corrections: |K| must be positive");
  const std::size_t m = t.colors();
  const auto dn = static_cast<double>(t.n());
  const auto dm = static_cast<double>(m);
  const SymbolMeasure nu = t.nu();
  const PairMeasure pi = t.pi();
  const double log_k = std::log(static_cast<double>(type_class_size));
  const double log_2pin = std::log(2.0 * std::numbers::pi * dn);

  double sum_log_pi = 0.0;
  double sum_inv_pi_1 = 0.0;
  double sum_inv_pi_2 = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const double p = pi(b, a);
      sum_log_pi += log_nonzero(p, pair_name(t.alphabet(), b, a));
      sum_inv_pi_1 += 1.0 / (12.0 * p + 1.0 / dn);
      sum_inv_pi_2 += 1.0 / (12.0 * p);
    }
  }
  double sum_log_nu = 0.0;
  double sum_inv_nu_1 = 0.0;
  double sum_inv_nu_2 = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    sum_log_nu += log_nonzero(nu[a], "nu_n(" + t.alphabet().symbol(a) + ")");
    sum_inv_nu_1 += 1.0 / (12.0 * nu[a] + 1.0 / dn);
    if (nu[a] > 0.0) sum_inv_nu_2 += 1.0 / (12.0 * nu[a]);
  }
  double sum_log_mu = 0.0;
  double sum_inv_mu_1 = 0.0;
  double sum_inv_mu_2 = 0.0;
  for (const auto& [key, c] : mu_n.counts()) {
    const double w = static_cast<double>(c) / dn;
    sum_log_mu += std::log(w);
    sum_inv_mu_1 += 1.0 / (12.0 * w + 1.0 / dn);
    sum_inv_mu_2 += 1.0 / (12.0 * w);
  }

  CorrectionTerms out;
  out.support_size = mu_n.counts().size();
  const auto support = static_cast<double>(out.support_size);
  out.alpha1 = -log_k / dn + sum_log_pi / dn + (dm + dm * dm) * log_2pin / (2.0 * dn) +
               sum_inv_nu_1 / (dn * dn) + sum_log_nu / dn + sum_inv_pi_1 / (dn * dn);
  out.beta1 = sum_log_mu / dn + sum_inv_mu_1 / (dn * dn);
  out.theta1 = dn * out.alpha1 - dn * out.beta1 - support * log_2pin / (2.0 * dn);
  out.alpha2 = log_k / dn + sum_inv_pi_2 / (dn * dn) + sum_inv_nu_2 / (dn * dn) + sum_log_pi / dn +
               (dm + dm * dm) * log_2pin / (2.0 * dn) + sum_log_nu / dn;
  out.beta2 = sum_log_mu / dn + sum_inv_mu_2 / dn;
  out.theta2 = dn * out.alpha2 - dn * out.beta2;
  return out;
}

SandwichReport sandwich(const TypeMember& member, const QuantizedTargets& t,
                        std::size_t type_class_size) {
  const CorrectionTerms terms = stirling_corrections(member.counts, t, type_class_size);
  const double nh = static_cast<double>(t.n()) * relative_entropy_to_poisson(member.counts, t);
  SandwichReport r;
  r.log_probability = log_rational(member.probability);
  r.log_lower = -nh + terms.theta1;
  r.log_upper = -std::log(static_cast<double>(type_class_size)) - nh + terms.theta2;
  r.lower_holds = r.log_lower <= r.log_probability;
  r.upper_holds = r.log_probability <= r.log_upper;
  return r;
}

}  // namespace ldp
