#include <numeric>

#include "ldp/samplers.hpp"

namespace ldp {
namespace {

EmpiricalMeasures from_profiles(const Alphabet& alphabet, std::int64_t n,
                                const std::vector<std::uint32_t>& symbols,
                                const std::vector<LocalProfile>& profiles) {
  std::map<ProfileKey, std::int64_t> counts;
  for (std::size_t v = 0; v < symbols.size(); ++v) ++counts[ProfileKey{symbols[v], profiles[v]}];
  EmpiricalMeasures out{ProfileCounts(alphabet, n, std::move(counts)), {}, {}, 0};
  const std::size_t m = alphabet.size();
  out.symbol_counts.assign(m, 0);
  out.pair_counts.assign(m * m, 0);
  for (std::size_t v = 0; v < symbols.size(); ++v) {
    ++out.symbol_counts[symbols[v]];
    for (std::size_t b = 0; b < m; ++b) out.pair_counts[b * m + symbols[v]] += profiles[v][b];
  }
  return out;
}

}  // namespace

std::int64_t CoupledSample::total_redraws() const {
  const std::size_t m = graph.alphabet.size();
  std::int64_t total = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) total += discrepancy(b, a);
  }
  return total;
}

SymbolMeasure EmpiricalMeasures::l1() const {
  std::vector<double> w(symbol_counts.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    w[a] = static_cast<double>(symbol_counts[a]) / static_cast<double>(profiles.n());
  }
  return SymbolMeasure(profiles.alphabet(), std::move(w));
}

PairMeasure EmpiricalMeasures::l2() const {
  std::vector<double> e(pair_counts.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = static_cast<double>(pair_counts[i]) / static_cast<double>(profiles.n());
  }
  return PairMeasure(profiles.alphabet(), std::move(e));
}

DegreeMeasure EmpiricalMeasures::degree() const {
  std::vector<std::int64_t> by_degree;
  for (const auto& [key, c] : profiles.counts()) {
    const auto k = key.profile.degree();
    if (k >= by_degree.size()) by_degree.resize(k + 1, 0);
    by_degree[k] += c;
  }
  std::vector<double> w(by_degree.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = static_cast<double>(by_degree[k]) / static_cast<double>(profiles.n());
  }
  return DegreeMeasure(std::move(w));
}

std::int64_t EmpiricalMeasures::isolated() const {
  std::int64_t total = 0;
  for (const auto& [key, c] : profiles.counts()) {
    if (key.profile.degree() == 0) total += c;
  }
  return total;
}

EmpiricalMeasures empirical_measures(const ColoredGraph& g) {
  const std::size_t m = g.alphabet.size();
  std::vector<LocalProfile> profiles(g.symbols.size(), LocalProfile::zeros(m));
  for (const auto& [u, v] : g.edges) {
    ++profiles[u][g.symbols[v]];
    ++profiles[v][g.symbols[u]];
  }
  auto out = from_profiles(g.alphabet, g.n, g.symbols, profiles);
  out.edge_count = static_cast<std::int64_t>(g.edges.size());
  return out;
}

EmpiricalMeasures empirical_measures(const AllocationOutcome& a) {
  auto out = from_profiles(a.alphabet, a.n, a.symbols, a.profiles);
  out.edge_count =
      std::accumulate(out.pair_counts.begin(), out.pair_counts.end(), std::int64_t{0}) / 2;
  return out;
}

}  // namespace ldp
