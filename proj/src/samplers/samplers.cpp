#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ldp/samplers.hpp"

namespace ldp {
namespace {

std::string pair_label(const Alphabet& al, std::size_t b, std::size_t a) {
  return "(" + al.symbol(b) + "," + al.symbol(a) + ")";
}

// Uniformly permuted symbol multiset with bins(a) copies of each a
// (Fisher-Yates, n - 1 draws).
std::vector<std::uint32_t> permuted_symbols(const QuantizedTargets& t, Rng& rng) {
  std::vector<std::uint32_t> s;
  s.reserve(static_cast<std::size_t>(t.n()));
  for (std::size_t a = 0; a < t.colors(); ++a) s.insert(s.end(), t.bins(a), static_cast<std::uint32_t>(a));
  for (std::size_t i = s.size(); i > 1; --i) std::swap(s[i - 1], s[rng.uniform_below(i)]);
  return s;
}

// Vertices of each symbol in increasing order.
struct Classes {
  std::vector<std::vector<std::uint32_t>> members;
};

Classes classes_of(const std::vector<std::uint32_t>& symbols, std::size_t m) {
  Classes c{std::vector<std::vector<std::uint32_t>>(m)};
  for (std::uint32_t v = 0; v < symbols.size(); ++v) c.members[symbols[v]].push_back(v);
  return c;
}

// Admissible vertex pairs in the {a, b} class, indexed by slot:
//   a != b: slot = rank_a * N_b + rank_b
//   a == b: slot = c (c - 1) / 2 + r for ranks r < c (colex order)
struct PairSlots {
  std::size_t a, b;
  std::uint64_t na, nb;

  std::uint64_t size() const { return a == b ? na * (na - (na > 0 ? 1 : 0)) / 2 : na * nb; }

  std::pair<std::uint64_t, std::uint64_t> unrank(std::uint64_t s) const {
    if (a != b) return {s / nb, s % nb};
    auto c = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(s))) / 2.0);
    while (c * (c - 1) / 2 > s) --c;
    while ((c + 1) * c / 2 <= s) ++c;
    return {s - c * (c - 1) / 2, c};
  }

  std::uint64_t rank(std::uint64_t ra, std::uint64_t rb) const {
    if (a != b) return ra * nb + rb;
    const auto lo = std::min(ra, rb);
    const auto hi = std::max(ra, rb);
    return hi * (hi - 1) / 2 + lo;
  }
};

void push_edge(ColoredGraph& g, std::uint32_t u, std::uint32_t v) {
  g.edges.emplace_back(std::min(u, v), std::max(u, v));
}

}  // namespace

std::vector<std::int64_t> edge_budget(const PairMeasure& pi_n, std::int64_t n) {
  const std::size_t m = pi_n.size();
  std::vector<std::int64_t> out(m * m);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const double x = a == b ? static_cast<double>(n) * pi_n(b, a) / 2.0
                              : static_cast<double>(n) * pi_n(b, a);
      const double r = std::nearbyint(x);
      if (std::fabs(x - r) > 1e-9) {
        throw QuantizationError("edge budget m_n" + pair_label(pi_n.alphabet(), b, a) + " = " +
                                std::to_string(x) + " is not an integer; pi_n is not quantized");
      }
      out[b * m + a] = static_cast<std::int64_t>(r);
    }
  }
  return out;
}

void require_graph_feasible(const QuantizedTargets& t) {
  for (std::size_t a = 0; a < t.colors(); ++a) {
    for (std::size_t b = a; b < t.colors(); ++b) {
      const PairSlots slots{a, b, static_cast<std::uint64_t>(t.bins(a)),
                            static_cast<std::uint64_t>(t.bins(b))};
      const auto want = static_cast<std::uint64_t>(t.edges(b, a));
      if (want > slots.size()) {
        throw FeasibilityError("infeasible edge budget for symbol pair " +
                               pair_label(t.alphabet(), b, a) + ": " + std::to_string(want) +
                               " edges requested but only " + std::to_string(slots.size()) +
                               " vertex pairs are available");
      }
    }
  }
}

void require_allocation_feasible(const QuantizedTargets& t) {
  for (std::size_t a = 0; a < t.colors(); ++a) {
    if (t.bins(a) > 0) continue;
    for (std::size_t b = 0; b < t.colors(); ++b) {
      if (t.balls(b, a) > 0) {
        throw FeasibilityError("pi_n" + pair_label(t.alphabet(), b, a) +
                               " > 0 but there are no bins of symbol " + t.alphabet().symbol(a));
      }
    }
  }
}

ColoredGraph sample_colored_graph(const GraphParams& params, Rng& rng) {
  require_same_alphabet(params.symbol_law.alphabet(), params.kernel.alphabet(), "GraphParams");
  if (params.n < 1) throw DomainError("GraphParams: n must be at least 1");
  if (!params.kernel.is_symmetric()) throw DomainError("GraphParams: kernel must be symmetric");
  const std::size_t m = params.symbol_law.alphabet().size();
  std::vector<double> cdf(m);
  std::partial_sum(params.symbol_law.weights().begin(), params.symbol_law.weights().end(), cdf.begin());

  ColoredGraph g{params.symbol_law.alphabet(), params.n, {}, {}};
  g.symbols.resize(static_cast<std::size_t>(params.n));
  for (auto& s : g.symbols) {
    const double u = rng.uniform01() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    s = static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), m - 1));
  }
  std::vector<double> p(m * m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::min(params.kernel.entries()[i] / static_cast<double>(params.n), 1.0);
  }
  for (std::uint32_t u = 0; u < g.symbols.size(); ++u) {
    for (std::uint32_t v = u + 1; v < g.symbols.size(); ++v) {
      if (rng.uniform01() < p[g.symbols[u] * m + g.symbols[v]]) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

ColoredGraph sample_conditional_graph(const QuantizedTargets& t, Rng& rng) {
  require_graph_feasible(t);
  ColoredGraph g{t.alphabet(), t.n(), permuted_symbols(t, rng), {}};
  const Classes cls = classes_of(g.symbols, t.colors());
  std::unordered_set<std::uint64_t> chosen;
  for (std::size_t a = 0; a < t.colors(); ++a) {
    for (std::size_t b = a; b < t.colors(); ++b) {
      const PairSlots slots{a, b, cls.members[a].size(), cls.members[b].size()};
      const auto want = static_cast<std::uint64_t>(t.edges(b, a));
      // Floyd's subset sampling: exactly `want` draws.
      chosen.clear();
      chosen.reserve(want);
      for (std::uint64_t j = slots.size() - want; j < slots.size(); ++j) {
        const auto s = rng.uniform_below(j + 1);
        chosen.insert(chosen.contains(s) ? j : s);
      }
      std::vector<std::uint64_t> ordered(chosen.begin(), chosen.end());
      std::sort(ordered.begin(), ordered.end());
      for (auto s : ordered) {
        const auto [ra, rb] = slots.unrank(s);
        push_edge(g, cls.members[a][ra], cls.members[b][rb]);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

ColoredGraph sample_conditional_graph(const SymbolMeasure& nu_n, const PairMeasure& pi_n,
                                      std::int64_t n, Rng& rng) {
  return sample_conditional_graph(QuantizedTargets::exact(nu_n, pi_n, n), rng);
}

AllocationOutcome sample_allocation(const QuantizedTargets& t, Rng& rng) {
  require_allocation_feasible(t);
  const std::size_t m = t.colors();
  AllocationOutcome out{t.alphabet(), t.n(), permuted_symbols(t, rng), {}};
  out.profiles.assign(out.symbols.size(), LocalProfile::zeros(m));
  const Classes cls = classes_of(out.symbols, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::int64_t i = 0; i < t.balls(b, a); ++i) {
        ++out.profiles[cls.members[a][rng.uniform_below(cls.members[a].size())]][b];
      }
    }
  }
  return out;
}

AllocationOutcome sample_allocation(const SymbolMeasure& nu_n, const PairMeasure& pi_n,
                                    std::int64_t n, Rng& rng) {
  return sample_allocation(QuantizedTargets::exact(nu_n, pi_n, n), rng);
}

CoupledSample sample_coupled(const QuantizedTargets& t, Rng& rng) {
  require_graph_feasible(t);
  require_allocation_feasible(t);
  const std::size_t m = t.colors();
  CoupledSample out{ColoredGraph{t.alphabet(), t.n(), permuted_symbols(t, rng), {}},
                    AllocationOutcome{t.alphabet(), t.n(), {}, {}},
                    std::vector<std::int64_t>(m * m, 0)};
  auto& g = out.graph;
  auto& alloc = out.allocation;
  alloc.symbols = g.symbols;
  alloc.profiles.assign(g.symbols.size(), LocalProfile::zeros(m));
  const Classes cls = classes_of(g.symbols, m);

  std::unordered_set<std::uint64_t> present;
  std::vector<std::uint64_t> sorted_present;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const PairSlots slots{a, b, cls.members[a].size(), cls.members[b].size()};
      const auto steps = t.edges(b, a);
      present.clear();
      present.reserve(static_cast<std::size_t>(steps));
      for (std::int64_t k = 0; k < steps; ++k) {
        // Three draws per step whether or not a redraw is needed.
        const auto r1 = rng.uniform_below(slots.na);
        const auto r2 = rng.uniform_below(slots.nb);
        const auto raw = rng();
        const auto v1 = cls.members[a][r1];
        const auto v2 = cls.members[b][r2];
        ++alloc.profiles[v1][b];
        ++alloc.profiles[v2][a];

        std::uint64_t slot = 0;
        bool redraw = v1 == v2;
        if (!redraw) {
          slot = slots.rank(r1, r2);
          redraw = present.contains(slot);
        }
        if (redraw) {
          // r-th absent slot, counting from 0 in slot order.
          const auto absent = slots.size() - present.size();
          slot = Rng::scale(raw, absent);
          sorted_present.assign(present.begin(), present.end());
          std::sort(sorted_present.begin(), sorted_present.end());
          for (auto p : sorted_present) {
            if (p > slot) break;
            ++slot;
          }
          ++out.discrepancies[b * m + a];
          if (a != b) ++out.discrepancies[a * m + b];
        }
        present.insert(slot);
        const auto [ra, rb] = slots.unrank(slot);
        push_edge(g, cls.members[a][ra], cls.members[b][rb]);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return out;
}

CoupledSample sample_coupled(const SymbolMeasure& nu_n, const PairMeasure& pi_n, std::int64_t n,
                             Rng& rng) {
  return sample_coupled(QuantizedTargets::exact(nu_n, pi_n, n), rng);
}

double collision_prob(std::int64_t k, std::size_t b, std::size_t a, std::int64_t m_n) {
  if (m_n <= 0) throw DomainError("collision_prob: m_n must be positive");
  if (k < 1 || k > m_n) throw DomainError("collision_prob: k must lie in 1..m_n");
  const double same = a == b ? 1.0 / static_cast<double>(m_n) : 0.0;
  const auto dm = static_cast<double>(m_n);
  return same + (1.0 - same) * static_cast<double>(k - 1) / (dm * dm);
}

}  // namespace ldp
