#pragma once

// Method of types for the balls-into-bins model: the finite class of
// achievable occupancy types for fixed (nu_n, pi_n), their exact
// probabilities, and the Stirling-type correction terms around them.
//
// Probabilities are exact rationals (GMP). Doubles appear only when a log is
// reported.

#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "ldp/measures.hpp"

namespace ldp {

struct EnumerationBudget {
  /// Cap on the total ball count sum_{b,a} n pi_n(b, a).
  std::int64_t max_balls = 64;
  /// Cap on the number of types materialised.
  std::int64_t max_types = 2'000'000;
};

struct TypeMember {
  ProfileCounts counts;
  mpq_class probability;
};

struct TypeClass {
  QuantizedTargets targets;
  /// Sorted by ProfileCounts ordering.
  std::vector<TypeMember> members;

  std::size_t size() const { return members.size(); }
};

/// Every achievable occupancy type, with its exact probability.
/// Throws BudgetError when the ball total or type count exceeds the budget
/// and FeasibilityError when balls are addressed to an empty symbol class.
TypeClass enumerate_type_class(const QuantizedTargets& t, const EnumerationBudget& budget = {});

/// P(M = mu_n) under the allocation model with targets t, or 0 if
/// Delta(mu_n) != (nu_n, pi_n).
mpq_class exact_type_probability(const ProfileCounts& mu_n, const QuantizedTargets& t);

/// Float-measure form; throws QuantizationError if mu is off the 1/n lattice.
mpq_class exact_type_probability(const NeighbourhoodMeasure& mu_n, const QuantizedTargets& t);

/// Independent oracle: enumerates every ball-to-bin assignment (bins grouped
/// by symbol) and aggregates occupancy types. Throws BudgetError when the
/// number of assignments exceeds `max_allocations`.
std::map<ProfileCounts, mpq_class> brute_force_type_distribution(
    const QuantizedTargets& t, std::uint64_t max_allocations = 10'000'000);

/// Number of ball-to-bin assignments, prod_{b,a} N_a^{n pi_n(b,a)}.
mpz_class allocation_count(const QuantizedTargets& t);

/// H(mu_n || Poi_n) evaluated pointwise against the product-Poisson reference.
double relative_entropy_to_poisson(const ProfileCounts& mu_n, const QuantizedTargets& t);

struct EntropyIdentity {
  /// H(nu) - H(mu) - sum_{b,a} [pi log pi - pi - pi log nu(a)] + sum mu log l(b)!
  double rearranged = 0.0;
  /// H(mu || Poi_n) computed directly.
  double direct = 0.0;

  double difference() const;
};

/// Both sides of the entropy identity. Requires Delta(mu_n) = (nu_n, pi_n);
/// throws DomainError otherwise.
EntropyIdentity entropy_identity(const ProfileCounts& mu_n, const QuantizedTargets& t);

/// |rearranged - direct|.
double entropy_identity_check(const ProfileCounts& mu_n, const QuantizedTargets& t);

struct CorrectionTerms {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::size_t support_size = 0;
};

/// Stirling correction terms theta/alpha/beta, with log 2 pi n taken as
/// log(2 pi n). Reported, not relied on. Throws DomainError naming the entry when a log of zero mass
/// would be taken.
CorrectionTerms stirling_corrections(const ProfileCounts& mu_n, const QuantizedTargets& t,
                                     std::size_t type_class_size);

struct SandwichReport {
  double log_probability = 0.0;
  /// -n H + theta1
  double log_lower = 0.0;
  /// -log |K| - n H + theta2
  double log_upper = 0.0;
  bool lower_holds = false;
  bool upper_holds = false;
};

SandwichReport sandwich(const TypeMember& member, const QuantizedTargets& t,
                        std::size_t type_class_size);

/// Natural log of a positive rational, safe for values outside double range.
double log_rational(const mpq_class& q);

}  // namespace ldp
