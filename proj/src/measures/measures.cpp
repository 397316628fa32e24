#include "ldp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ldp/kernels.hpp"

namespace ldp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kConsistencyTolerance = 1e-10;
constexpr double kLatticeTolerance = 1e-9;
// DegreeMeasure is dense; refuse to materialise absurd supports.
constexpr std::uint64_t kMaxDenseDegree = 10'000'000;

void require_probability(std::span<const double> w, std::string_view what) {
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw DomainError(std::string(what) + ": weights must be finite and non-negative");
    }
    sum += x;
  }
  if (std::fabs(sum - 1.0) > kMassTolerance) {
    throw DomainError(std::string(what) + ": weights sum to " + std::to_string(sum) +
                      ", expected 1");
  }
}

std::int64_t lattice_round(double x, std::string_view what) {
  const double r = std::nearbyint(x);
  if (!std::isfinite(x) || std::fabs(x - r) > kLatticeTolerance || r < 0.0) {
    throw QuantizationError(std::string(what) + " = " + std::to_string(x) +
                            " is not a non-negative integer");
  }
  return static_cast<std::int64_t>(r);
}

// Largest-remainder apportionment of `total` units to real targets `x`.
// Ties go to the lower index.
std::vector<std::int64_t> largest_remainder(std::span<const double> x, std::int64_t total) {
  std::vector<std::int64_t> out(x.size());
  std::vector<double> rem(x.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = std::floor(x[i]);
    out[i] = static_cast<std::int64_t>(f);
    rem[i] = x[i] - f;
    assigned += out[i];
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return rem[i] > rem[j]; });
  std::int64_t left = total - assigned;
  for (std::size_t k = 0; left > 0 && k < order.size(); ++k, --left) ++out[order[k]];
  for (std::size_t k = order.size(); left < 0 && k-- > 0;) {
    // Only reachable through floating noise around an exact lattice point.
    if (out[order[k]] > 0) {
      --out[order[k]];
      ++left;
    }
  }
  return out;
}

}  // namespace

// --- Alphabet --------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw DomainError("alphabet must contain at least one symbol");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw DomainError("alphabet symbols must be non-empty strings");
    if (!seen.insert(s).second) throw DomainError("duplicate symbol '" + s + "' in alphabet");
  }
}

Alphabet Alphabet::letters(std::size_t m) {
  std::vector<std::string> s;
  s.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    s.push_back(m <= 26 ? std::string(1, static_cast<char>('a' + i)) : "s" + std::to_string(i));
  }
  return Alphabet(std::move(s));
}

std::optional<std::size_t> Alphabet::index_of(std::string_view s) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == s) return i;
  }
  return std::nullopt;
}

std::size_t Alphabet::require_index(std::string_view s) const {
  if (auto i = index_of(s)) return *i;
  throw FormatError("unknown symbol '" + std::string(s) + "'");
}

void require_same_alphabet(const Alphabet& lhs, const Alphabet& rhs, std::string_view where) {
  if (!(lhs == rhs)) throw AlphabetMismatch(std::string(where) + ": alphabets differ");
}

// --- SymbolMeasure / PairMeasure ---------------------------------------------

SymbolMeasure::SymbolMeasure(Alphabet alphabet, std::vector<double> weights)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
  if (weights_.size() != alphabet_.size()) {
    throw DomainError("SymbolMeasure: one weight per symbol required");
  }
  require_probability(weights_, "SymbolMeasure");
}

PairMeasure::PairMeasure(Alphabet alphabet, std::vector<double> entries)
    : alphabet_(std::move(alphabet)), entries_(std::move(entries)) {
  if (entries_.size() != alphabet_.size() * alphabet_.size()) {
    throw DomainError("PairMeasure: expected m*m entries");
  }
  for (double x : entries_) {
    if (!std::isfinite(x) || x < 0.0) {
      throw DomainError("PairMeasure: entries must be finite and non-negative");
    }
  }
}

PairMeasure PairMeasure::zero(Alphabet alphabet) {
  const std::size_t m = alphabet.size();
  return PairMeasure(std::move(alphabet), std::vector<double>(m * m, 0.0));
}

double PairMeasure::total_mass() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

bool PairMeasure::is_symmetric() const {
  const std::size_t m = size();
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = b + 1; a < m; ++a) {
      if ((*this)(b, a) != (*this)(a, b)) return false;
    }
  }
  return true;
}

// --- profiles and neighbourhood measures -----------------------------------

std::uint64_t LocalProfile::degree() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

NeighbourhoodMeasure::NeighbourhoodMeasure(Alphabet alphabet, std::map<ProfileKey, double> weights)
    : alphabet_(std::move(alphabet)) {
  double sum = 0.0;
  for (auto& [key, w] : weights) {
    if (key.symbol >= alphabet_.size()) throw DomainError("NeighbourhoodMeasure: symbol index out of range");
    if (key.profile.size() != alphabet_.size()) {
      throw DomainError("NeighbourhoodMeasure: profiles must be dense over the alphabet");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("NeighbourhoodMeasure: weights must be finite and non-negative");
    }
    sum += w;
    if (w > 0.0) weights_.emplace(key, w);
  }
  if (std::fabs(sum - 1.0) > kMassTolerance) {
    throw DomainError("NeighbourhoodMeasure: weights sum to " + std::to_string(sum) +
                      ", expected 1");
  }
}

double NeighbourhoodMeasure::operator()(const ProfileKey& key) const {
  auto it = weights_.find(key);
  return it == weights_.end() ? 0.0 : it->second;
}

DegreeMeasure::DegreeMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  require_probability(weights_, "DegreeMeasure");
  while (!weights_.empty() && weights_.back() == 0.0) weights_.pop_back();
}

double DegreeMeasure::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) m += static_cast<double>(k) * weights_[k];
  return m;
}

// --- QuantizedTargets ------------------------------------------------------

QuantizedTargets::QuantizedTargets(Alphabet alphabet, std::int64_t n,
                                   std::vector<std::int64_t> bins,
                                   std::vector<std::int64_t> balls)
    : alphabet_(std::move(alphabet)), n_(n), bins_(std::move(bins)), balls_(std::move(balls)) {}

QuantizedTargets QuantizedTargets::from_counts(Alphabet alphabet, std::int64_t n,
                                               std::vector<std::int64_t> bins,
                                               std::vector<std::int64_t> balls) {
  const std::size_t m = alphabet.size();
  if (n < 1) throw QuantizationError("n must be at least 1");
  if (bins.size() != m || balls.size() != m * m) {
    throw QuantizationError("bin/ball count arrays do not match the alphabet");
  }
  std::int64_t total = 0;
  for (auto c : bins) {
    if (c < 0) throw QuantizationError("negative bin count");
    total += c;
  }
  if (total != n) {
    throw QuantizationError("bin counts sum to " + std::to_string(total) + ", expected n = " +
                            std::to_string(n));
  }
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const auto v = balls[b * m + a];
      if (v < 0) throw QuantizationError("negative ball count");
      if (v != balls[a * m + b]) {
        throw QuantizationError("pair counts are not symmetric at (" + alphabet.symbol(b) + "," +
                                alphabet.symbol(a) + ")");
      }
      if (a == b && v % 2 != 0) {
        throw QuantizationError("n pi(" + alphabet.symbol(a) + "," + alphabet.symbol(a) +
                                ") must be even");
      }
    }
  }
  return QuantizedTargets(std::move(alphabet), n, std::move(bins), std::move(balls));
}

QuantizedTargets QuantizedTargets::exact(const SymbolMeasure& nu, const PairMeasure& pi,
                                         std::int64_t n) {
  require_same_alphabet(nu.alphabet(), pi.alphabet(), "QuantizedTargets::exact");
  if (n < 1) throw QuantizationError("n must be at least 1");
  const std::size_t m = nu.alphabet().size();
  const auto dn = static_cast<double>(n);
  std::vector<std::int64_t> bins(m);
  for (std::size_t a = 0; a < m; ++a) {
    bins[a] = lattice_round(dn * nu[a], "n nu(" + nu.alphabet().symbol(a) + ")");
  }
  std::vector<std::int64_t> balls(m * m);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const std::string label = "(" + pi.alphabet().symbol(b) + "," + pi.alphabet().symbol(a) + ")";
      if (a == b) {
        balls[b * m + a] = 2 * lattice_round(dn * pi(b, a) / 2.0, "n pi" + label + "/2");
      } else {
        balls[b * m + a] = lattice_round(dn * pi(b, a), "n pi" + label);
      }
    }
  }
  return from_counts(nu.alphabet(), n, std::move(bins), std::move(balls));
}

std::int64_t QuantizedTargets::edges(std::size_t b, std::size_t a) const {
  return a == b ? balls(b, a) / 2 : balls(b, a);
}

std::int64_t QuantizedTargets::total_balls() const {
  return std::accumulate(balls_.begin(), balls_.end(), std::int64_t{0});
}

SymbolMeasure QuantizedTargets::nu() const {
  std::vector<double> w(bins_.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    w[a] = static_cast<double>(bins_[a]) / static_cast<double>(n_);
  }
  return SymbolMeasure(alphabet_, std::move(w));
}

PairMeasure QuantizedTargets::pi() const {
  std::vector<double> e(balls_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = static_cast<double>(balls_[i]) / static_cast<double>(n_);
  }
  return PairMeasure(alphabet_, std::move(e));
}

// --- ProfileCounts ---------------------------------------------------------

ProfileCounts::ProfileCounts(Alphabet alphabet, std::int64_t n,
                             std::map<ProfileKey, std::int64_t> counts)
    : alphabet_(std::move(alphabet)), n_(n) {
  std::int64_t total = 0;
  for (auto& [key, c] : counts) {
    if (key.symbol >= alphabet_.size() || key.profile.size() != alphabet_.size()) {
      throw DomainError("ProfileCounts: key does not match the alphabet");
    }
    if (c < 0) throw DomainError("ProfileCounts: negative count");
    total += c;
    if (c > 0) counts_.emplace(key, c);
  }
  if (total != n_) {
    throw DomainError("ProfileCounts: counts sum to " + std::to_string(total) + ", expected " +
                      std::to_string(n_));
  }
}

ProfileCounts ProfileCounts::from_measure(const NeighbourhoodMeasure& mu, std::int64_t n) {
  std::map<ProfileKey, std::int64_t> counts;
  for (const auto& [key, w] : mu.support()) {
    counts.emplace(key, lattice_round(static_cast<double>(n) * w, "n mu(a,l)"));
  }
  std::int64_t total = 0;
  for (const auto& [key, c] : counts) total += c;
  if (total != n) throw QuantizationError("n mu does not sum to n");
  return ProfileCounts(mu.alphabet(), n, std::move(counts));
}

std::vector<std::int64_t> ProfileCounts::symbol_counts() const {
  std::vector<std::int64_t> out(alphabet_.size(), 0);
  for (const auto& [key, c] : counts_) out[key.symbol] += c;
  return out;
}

std::vector<std::int64_t> ProfileCounts::ball_counts() const {
  const std::size_t m = alphabet_.size();
  std::vector<std::int64_t> out(m * m, 0);
  for (const auto& [key, c] : counts_) {
    for (std::size_t b = 0; b < m; ++b) {
      out[b * m + key.symbol] += c * static_cast<std::int64_t>(key.profile[b]);
    }
  }
  return out;
}

bool ProfileCounts::matches(const QuantizedTargets& targets) const {
  if (!(alphabet_ == targets.alphabet()) || n_ != targets.n()) return false;
  const auto sc = symbol_counts();
  const auto bc = ball_counts();
  return std::equal(sc.begin(), sc.end(), targets.bin_counts().begin()) &&
         std::equal(bc.begin(), bc.end(), targets.ball_counts().begin());
}

NeighbourhoodMeasure ProfileCounts::measure() const {
  std::map<ProfileKey, double> w;
  for (const auto& [key, c] : counts_) {
    w.emplace(key, static_cast<double>(c) / static_cast<double>(n_));
  }
  return NeighbourhoodMeasure(alphabet_, std::move(w));
}

std::string_view to_string(Consistency c) {
  switch (c) {
    case Consistency::Consistent:
      return "consistent";
    case Consistency::SubConsistent:
      return "sub-consistent";
    case Consistency::Neither:
      return "neither";
  }
  return "?";
}

// --- functionals -----------------------------------------------------------

SymbolMeasure marginal_symbol(const NeighbourhoodMeasure& mu) {
  std::vector<double> w(mu.alphabet().size(), 0.0);
  for (const auto& [key, p] : mu.support()) w[key.symbol] += p;
  return SymbolMeasure(mu.alphabet(), std::move(w));
}

PairMeasure pair_projection(const NeighbourhoodMeasure& mu) {
  const std::size_t m = mu.alphabet().size();
  std::vector<double> e(m * m, 0.0);
  for (const auto& [key, p] : mu.support()) {
    for (std::size_t b = 0; b < m; ++b) {
      e[b * m + key.symbol] += p * static_cast<double>(key.profile[b]);
    }
  }
  return PairMeasure(mu.alphabet(), std::move(e));
}

Consistency check_consistency(const PairMeasure& pi, const NeighbourhoodMeasure& mu) {
  require_same_alphabet(pi.alphabet(), mu.alphabet(), "check_consistency");
  const PairMeasure delta = pair_projection(mu);
  bool all_equal = true;
  for (std::size_t i = 0; i < delta.entries().size(); ++i) {
    const double slack = pi.entries()[i] - delta.entries()[i];
    if (slack < -kConsistencyTolerance) return Consistency::Neither;
    if (slack > kConsistencyTolerance) all_equal = false;
  }
  return all_equal ? Consistency::Consistent : Consistency::SubConsistent;
}

double total_variation(const NeighbourhoodMeasure& mu, const NeighbourhoodMeasure& other) {
  require_same_alphabet(mu.alphabet(), other.alphabet(), "total_variation");
  std::vector<double> lhs;
  std::vector<double> rhs;
  lhs.reserve(mu.support().size() + other.support().size());
  rhs.reserve(lhs.capacity());
  auto i = mu.support().begin();
  auto j = other.support().begin();
  while (i != mu.support().end() || j != other.support().end()) {
    if (j == other.support().end() || (i != mu.support().end() && i->first < j->first)) {
      lhs.push_back(i->second);
      rhs.push_back(0.0);
      ++i;
    } else if (i == mu.support().end() || j->first < i->first) {
      lhs.push_back(0.0);
      rhs.push_back(j->second);
      ++j;
    } else {
      lhs.push_back(i->second);
      rhs.push_back(j->second);
      ++i;
      ++j;
    }
  }
  return 0.5 * kernels::l1_distance(lhs, rhs);
}

double total_variation(const DegreeMeasure& d, const DegreeMeasure& other) {
  const std::size_t len = std::max(d.support_end(), other.support_end());
  std::vector<double> lhs(len, 0.0);
  std::vector<double> rhs(len, 0.0);
  std::copy(d.weights().begin(), d.weights().end(), lhs.begin());
  std::copy(other.weights().begin(), other.weights().end(), rhs.begin());
  return 0.5 * kernels::l1_distance(lhs, rhs);
}

DegreeMeasure degree_projection(const NeighbourhoodMeasure& mu) {
  std::map<std::uint64_t, double> by_degree;
  for (const auto& [key, p] : mu.support()) by_degree[key.profile.degree()] += p;
  const std::uint64_t top = by_degree.empty() ? 0 : by_degree.rbegin()->first;
  if (top > kMaxDenseDegree) throw DomainError("degree_projection: degree exceeds dense limit");
  std::vector<double> w(top + 1, 0.0);
  for (const auto& [k, p] : by_degree) w[k] = p;
  return DegreeMeasure(std::move(w));
}

// --- relative entropy ------------------------------------------------------

namespace {
Extended from_kl(kernels::KlSum s) {
  if (s.infinite) return Extended::infinity();
  return Extended(s.value);
}
}  // namespace

Extended relative_entropy(std::span<const double> p, std::span<const double> q) {
  return from_kl(kernels::kl_divergence(p, q));
}

Extended relative_entropy(const NeighbourhoodMeasure& p, const NeighbourhoodMeasure& q) {
  require_same_alphabet(p.alphabet(), q.alphabet(), "relative_entropy");
  std::vector<double> pv;
  std::vector<double> qv;
  pv.reserve(p.support().size());
  qv.reserve(p.support().size());
  for (const auto& [key, w] : p.support()) {
    pv.push_back(w);
    qv.push_back(q(key));
  }
  return from_kl(kernels::kl_divergence(pv, qv));
}

Extended relative_entropy(const DegreeMeasure& p, const DegreeMeasure& q) {
  std::vector<double> qv(p.support_end(), 0.0);
  for (std::size_t k = 0; k < qv.size(); ++k) qv[k] = q[k];
  return from_kl(kernels::kl_divergence(p.weights(), qv));
}

Extended relative_entropy_log(const NeighbourhoodMeasure& p,
                              const std::function<double(const ProfileKey&)>& log_q) {
  std::vector<double> pv;
  std::vector<double> lq;
  pv.reserve(p.support().size());
  lq.reserve(p.support().size());
  for (const auto& [key, w] : p.support()) {
    pv.push_back(w);
    lq.push_back(log_q(key));
  }
  return from_kl(kernels::kl_divergence_log(pv, lq));
}

Extended relative_entropy_log(const DegreeMeasure& p,
                              const std::function<double(std::size_t)>& log_q) {
  std::vector<double> lq(p.support_end());
  for (std::size_t k = 0; k < lq.size(); ++k) lq[k] = log_q(k);
  return from_kl(kernels::kl_divergence_log(p.weights(), lq));
}

// --- Poisson reference -----------------------------------------------------

double log_poisson_pmf(double c, std::uint64_t k) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("Poisson mean must be finite and >= 0");
  if (c == 0.0) return k == 0 ? 0.0 : kNegInf;
  const auto dk = static_cast<double>(k);
  return -c + dk * std::log(c) - std::lgamma(dk + 1.0);
}

double log_poi_mass(const SymbolMeasure& nu, const PairMeasure& pi, std::size_t a,
                    const LocalProfile& l) {
  require_same_alphabet(nu.alphabet(), pi.alphabet(), "poi_mass");
  const std::size_t m = nu.alphabet().size();
  if (a >= m || l.size() != m) throw DomainError("poi_mass: symbol or profile does not match alphabet");
  const double base = nu[a];
  if (base <= 0.0) {
    for (std::size_t b = 0; b < m; ++b) {
      if (pi(b, a) > 0.0) {
        throw DomainError("poi_mass: nu(" + nu.alphabet().symbol(a) +
                          ") = 0 but pi(., a) > 0; Poisson intensity undefined");
      }
    }
    return kNegInf;
  }
  double acc = std::log(base);
  for (std::size_t b = 0; b < m; ++b) {
    const double term = log_poisson_pmf(pi(b, a) / base, l[b]);
    if (term == kNegInf) return kNegInf;
    acc += term;
  }
  return acc;
}

double poi_mass(const SymbolMeasure& nu, const PairMeasure& pi, std::size_t a,
                const LocalProfile& l) {
  const double lp = log_poi_mass(nu, pi, a, l);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

DegreeMeasure poisson_degree_measure(double c, double tail) {
  if (!(c >= 0.0)) throw DomainError("poisson_degree_measure: mean must be >= 0");
  std::vector<double> w;
  double mass = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    const double p = std::exp(log_poisson_pmf(c, k));
    w.push_back(p);
    mass += p;
    if (static_cast<double>(k) >= c && 1.0 - mass < tail) break;
    if (k > kMaxDenseDegree) throw DomainError("poisson_degree_measure: mean too large");
  }
  return DegreeMeasure(std::move(w));
}

// --- quantization ----------------------------------------------------------

QuantizedTargets quantize(const SymbolMeasure& nu, const PairMeasure& pi, std::int64_t n) {
  require_same_alphabet(nu.alphabet(), pi.alphabet(), "quantize_targets");
  if (n < 1) throw DomainError("quantize_targets: n must be at least 1");
  const std::size_t m = nu.alphabet().size();
  const auto dn = static_cast<double>(n);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = b + 1; a < m; ++a) {
      const double scale = std::max({1.0, pi(b, a), pi(a, b)});
      if (std::fabs(pi(b, a) - pi(a, b)) > 1e-12 * scale) {
        throw DomainError("quantize_targets: pi must be symmetric");
      }
    }
  }

  std::vector<double> bin_targets(m);
  for (std::size_t a = 0; a < m; ++a) bin_targets[a] = dn * nu[a];
  auto bins = largest_remainder(bin_targets, n);

  // Upper triangle in edge units: n pi(a,b) off the diagonal, n pi(a,a)/2 on it.
  std::vector<double> edge_targets;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  double edge_total = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double units = a == b ? dn * pi(a, a) / 2.0 : dn * pi(a, b);
      edge_targets.push_back(units);
      cells.emplace_back(a, b);
      edge_total += units;
    }
  }
  const auto edges = largest_remainder(edge_targets, static_cast<std::int64_t>(std::floor(edge_total + 0.5)));
  std::vector<std::int64_t> balls(m * m, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [a, b] = cells[i];
    if (a == b) {
      balls[a * m + a] = 2 * edges[i];
    } else {
      balls[a * m + b] = edges[i];
      balls[b * m + a] = edges[i];
    }
  }
  return QuantizedTargets::from_counts(nu.alphabet(), n, std::move(bins), std::move(balls));
}

std::pair<SymbolMeasure, PairMeasure> quantize_targets(const SymbolMeasure& nu,
                                                       const PairMeasure& pi, std::int64_t n) {
  const auto q = quantize(nu, pi, n);
  return {q.nu(), q.pi()};
}

std::pair<SymbolMeasure, PairMeasure> single_color_targets(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("mean degree c must be finite and >= 0");
  Alphabet one = Alphabet::letters(1);
  return {SymbolMeasure(one, {1.0}), PairMeasure(one, {c})};
}

}  // namespace ldp
