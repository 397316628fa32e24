#pragma once

// Measure-theoretic domain types for colored sparse graphs:
//
//   SymbolMeasure        nu(a)            law of vertex symbols
//   PairMeasure          pi(b, a)         finite measure on ordered symbol pairs
//   NeighbourhoodMeasure mu(a, l)         law of (own symbol, neighbour-count profile)
//   DegreeMeasure        d(k)             law of vertex degrees
//
// plus the exact integer counterparts used for empirical measures
// (QuantizedTargets, ProfileCounts). All types are immutable after
// construction.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldp/errors.hpp"
#include "ldp/extended.hpp"

namespace ldp {

/// Tolerance on total mass of probability measures built from floats.
inline constexpr double kMassTolerance = 1e-12;

/// Ordered, duplicate-free list of symbol identifiers. The position of a
/// symbol is its canonical index for the lifetime of a computation.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  /// "a", "b", ... for m <= 26, otherwise "s0", "s1", ...
  static Alphabet letters(std::size_t m);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view s) const;
  std::size_t require_index(std::string_view s) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

void require_same_alphabet(const Alphabet& lhs, const Alphabet& rhs, std::string_view where);

class SymbolMeasure {
 public:
  SymbolMeasure(Alphabet alphabet, std::vector<double> weights);

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t a) const { return weights_.at(a); }

 private:
  Alphabet alphabet_;
  std::vector<double> weights_;
};

/// Non-negative finite measure on Y x Y, stored row-major as entry(b, a).
/// Symmetry is not enforced: Delta_2 of an arbitrary neighbourhood measure
/// may be asymmetric. Callers that need a symmetric measure check
/// is_symmetric().
class PairMeasure {
 public:
  PairMeasure(Alphabet alphabet, std::vector<double> entries);
  static PairMeasure zero(Alphabet alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  double operator()(std::size_t b, std::size_t a) const { return entries_.at(b * size() + a); }
  std::span<const double> entries() const { return entries_; }
  double total_mass() const;
  bool is_symmetric() const;

 private:
  Alphabet alphabet_;
  std::vector<double> entries_;
};

/// Neighbour counts l(b), dense over the alphabet.
class LocalProfile {
 public:
  LocalProfile() = default;
  explicit LocalProfile(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {}
  static LocalProfile zeros(std::size_t m) { return LocalProfile(std::vector<std::uint32_t>(m, 0)); }

  std::size_t size() const { return counts_.size(); }
  std::uint32_t operator[](std::size_t b) const { return counts_[b]; }
  std::uint32_t& operator[](std::size_t b) { return counts_[b]; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::uint64_t degree() const;

  auto operator<=>(const LocalProfile&) const = default;

 private:
  std::vector<std::uint32_t> counts_;
};

/// A point (a, l) of Y x N^Y.
struct ProfileKey {
  std::uint32_t symbol = 0;
  LocalProfile profile;

  auto operator<=>(const ProfileKey&) const = default;
};

/// Probability measure on Y x N^Y with finite support, keyed canonically.
class NeighbourhoodMeasure {
 public:
  NeighbourhoodMeasure(Alphabet alphabet, std::map<ProfileKey, double> weights);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::map<ProfileKey, double>& support() const { return weights_; }
  double operator()(const ProfileKey& key) const;

 private:
  Alphabet alphabet_;
  std::map<ProfileKey, double> weights_;
};

/// Probability measure on N; weights()[k] = d(k), trailing zeros trimmed.
class DegreeMeasure {
 public:
  explicit DegreeMeasure(std::vector<double> weights);

  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t k) const { return k < weights_.size() ? weights_[k] : 0.0; }
  std::size_t support_end() const { return weights_.size(); }
  double mean() const;

 private:
  std::vector<double> weights_;
};

/// (nu_n, pi_n) in W_n x W~_n as integer numerators over n:
/// bins(a) = n nu_n(a) and balls(b, a) = n pi_n(b, a). balls(a, a) is even
/// and balls is symmetric.
class QuantizedTargets {
 public:
  /// Validates sums, symmetry and even diagonal; throws QuantizationError.
  static QuantizedTargets from_counts(Alphabet alphabet, std::int64_t n,
                                      std::vector<std::int64_t> bins,
                                      std::vector<std::int64_t> balls);

  /// Reads an already-quantized pair of measures; throws QuantizationError
  /// if any n nu(a) or n pi(b,a)/(1+1{a=b}) is off the integer lattice by
  /// more than 1e-9.
  static QuantizedTargets exact(const SymbolMeasure& nu, const PairMeasure& pi, std::int64_t n);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t colors() const { return alphabet_.size(); }
  std::int64_t n() const { return n_; }
  std::int64_t bins(std::size_t a) const { return bins_.at(a); }
  std::int64_t balls(std::size_t b, std::size_t a) const { return balls_.at(b * colors() + a); }
  std::span<const std::int64_t> bin_counts() const { return bins_; }
  std::span<const std::int64_t> ball_counts() const { return balls_; }
  /// m_n(b, a): edges between the two symbol classes.
  std::int64_t edges(std::size_t b, std::size_t a) const;
  std::int64_t total_balls() const;

  SymbolMeasure nu() const;
  PairMeasure pi() const;

  bool operator==(const QuantizedTargets&) const = default;

 private:
  QuantizedTargets(Alphabet alphabet, std::int64_t n, std::vector<std::int64_t> bins,
                   std::vector<std::int64_t> balls);

  Alphabet alphabet_;
  std::int64_t n_;
  std::vector<std::int64_t> bins_;
  std::vector<std::int64_t> balls_;
};

/// n mu(a, l) as exact integers; the empirical neighbourhood (or occupancy)
/// measure of a configuration on n vertices (bins).
class ProfileCounts {
 public:
  ProfileCounts(Alphabet alphabet, std::int64_t n, std::map<ProfileKey, std::int64_t> counts);

  /// Inverse of measure(): throws QuantizationError off the 1/n lattice.
  static ProfileCounts from_measure(const NeighbourhoodMeasure& mu, std::int64_t n);

  const Alphabet& alphabet() const { return alphabet_; }
  std::int64_t n() const { return n_; }
  const std::map<ProfileKey, std::int64_t>& counts() const { return counts_; }

  /// n Delta_1: vertices per symbol.
  std::vector<std::int64_t> symbol_counts() const;
  /// n Delta_2, row-major (b, a).
  std::vector<std::int64_t> ball_counts() const;
  /// True iff Delta(mu) = (nu_n, pi_n), in integer arithmetic.
  bool matches(const QuantizedTargets& targets) const;

  NeighbourhoodMeasure measure() const;

  auto operator<=>(const ProfileCounts& other) const {
    if (auto c = n_ <=> other.n_; c != 0) return c;
    return counts_ <=> other.counts_;
  }
  bool operator==(const ProfileCounts& other) const {
    return n_ == other.n_ && counts_ == other.counts_;
  }

 private:
  Alphabet alphabet_;
  std::int64_t n_;
  std::map<ProfileKey, std::int64_t> counts_;
};

enum class Consistency { Consistent, SubConsistent, Neither };

std::string_view to_string(Consistency c);

// --- functionals -----------------------------------------------------------

/// Delta_1(mu)(a) = sum_l mu(a, l).
SymbolMeasure marginal_symbol(const NeighbourhoodMeasure& mu);

/// Delta_2(mu)(b, a) = sum_{(a,l)} mu(a, l) l(b). Not necessarily symmetric.
PairMeasure pair_projection(const NeighbourhoodMeasure& mu);

/// Compares pi with Delta_2(mu) entrywise at absolute tolerance 1e-10.
Consistency check_consistency(const PairMeasure& pi, const NeighbourhoodMeasure& mu);

/// Half the l1 distance over the union of supports.
double total_variation(const NeighbourhoodMeasure& mu, const NeighbourhoodMeasure& other);
double total_variation(const DegreeMeasure& d, const DegreeMeasure& other);

/// D(k) = sum of mu(a, l) over degree(l) = k.
DegreeMeasure degree_projection(const NeighbourhoodMeasure& mu);

// --- relative entropy ------------------------------------------------------

/// H(p || q) over dense vectors, 0 log 0 = 0, +inf if p > 0 where q = 0.
Extended relative_entropy(std::span<const double> p, std::span<const double> q);

Extended relative_entropy(const NeighbourhoodMeasure& p, const NeighbourhoodMeasure& q);
Extended relative_entropy(const DegreeMeasure& p, const DegreeMeasure& q);

/// H(p || q) for a reference given pointwise in log space (-inf for q = 0).
Extended relative_entropy_log(const NeighbourhoodMeasure& p,
                              const std::function<double(const ProfileKey&)>& log_q);
Extended relative_entropy_log(const DegreeMeasure& p,
                              const std::function<double(std::size_t)>& log_q);

// --- Poisson reference measures --------------------------------------------

/// Poi(a, l) = nu(a) prod_b e^{-pi(b,a)/nu(a)} (pi(b,a)/nu(a))^{l(b)} / l(b)!.
/// Throws DomainError if nu(a) = 0 while some pi(., a) > 0.
double poi_mass(const SymbolMeasure& nu, const PairMeasure& pi, std::size_t a,
                const LocalProfile& l);

/// log poi_mass, -inf where the mass is zero.
double log_poi_mass(const SymbolMeasure& nu, const PairMeasure& pi, std::size_t a,
                    const LocalProfile& l);

/// log q_c(k) for the Poisson law with mean c >= 0.
double log_poisson_pmf(double c, std::uint64_t k);

/// q_c truncated once the remaining tail mass is below `tail` (not renormalised).
DegreeMeasure poisson_degree_measure(double c, double tail = 1e-14);

// --- quantization ----------------------------------------------------------

/// Largest-remainder rounding of (nu, pi) onto W_n x W~_n. pi is rounded
/// on its upper triangle in edge units and mirrored, so the result is
/// symmetric; the edge total is the nearest integer to n |pi| / 2.
QuantizedTargets quantize(const SymbolMeasure& nu, const PairMeasure& pi, std::int64_t n);

/// quantize() returned as float measures.
std::pair<SymbolMeasure, PairMeasure> quantize_targets(const SymbolMeasure& nu,
                                                       const PairMeasure& pi, std::int64_t n);

/// Single-color shorthand: nu = delta_a, pi(a, a) = c.
std::pair<SymbolMeasure, PairMeasure> single_color_targets(double c);

}  // namespace ldp
