#pragma once

// Samplers for the colored graph models and the balls-into-bins surrogate.
//
// Vertices are 0-based in memory; the JSON codecs shift to 1-based. Every
// sampler is a pure function of its inputs and the injected Rng, and
// consumes a fixed number of draws per step so that a stream reproduces the
// same sample regardless of where it is run.

#include <cstdint>
#include <utility>
#include <vector>

#include "ldp/measures.hpp"
#include "ldp/rng.hpp"

namespace ldp {

/// Unconditional model: i.i.d. symbols, independent edges with
/// p_n(a, b) = min(C(a, b) / n, 1).
struct GraphParams {
  std::int64_t n;
  SymbolMeasure symbol_law;
  PairMeasure kernel;
};

struct ColoredGraph {
  Alphabet alphabet;
  std::int64_t n = 0;
  std::vector<std::uint32_t> symbols;
  /// Unordered pairs (u, v) with u < v, sorted lexicographically.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

struct AllocationOutcome {
  Alphabet alphabet;
  std::int64_t n = 0;
  std::vector<std::uint32_t> symbols;
  /// profiles[v][b]: symbol-b balls in bin v.
  std::vector<LocalProfile> profiles;
};

struct CoupledSample {
  ColoredGraph graph;
  AllocationOutcome allocation;
  /// B(b, a), row-major m x m. Symmetric: a redraw in the {a, b} class is
  /// recorded in both (b, a) and (a, b); same-symbol redraws once on the
  /// diagonal.
  std::vector<std::int64_t> discrepancies;

  std::int64_t discrepancy(std::size_t b, std::size_t a) const {
    return discrepancies.at(b * graph.alphabet.size() + a);
  }
  /// Number of redraw steps, summed over unordered symbol pairs.
  std::int64_t total_redraws() const;
};

/// Exact integer form of (L1, L2, M, D) for one configuration.
struct EmpiricalMeasures {
  ProfileCounts profiles;
  /// n L1(a).
  std::vector<std::int64_t> symbol_counts;
  /// n L2(b, a), row-major.
  std::vector<std::int64_t> pair_counts;
  /// |E| for graphs; half the ball total for allocations.
  std::int64_t edge_count = 0;

  SymbolMeasure l1() const;
  PairMeasure l2() const;
  NeighbourhoodMeasure neighbourhood() const { return profiles.measure(); }
  DegreeMeasure degree() const;
  /// n D(0): vertices (bins) with an all-zero profile.
  std::int64_t isolated() const;
};

EmpiricalMeasures empirical_measures(const ColoredGraph& g);
EmpiricalMeasures empirical_measures(const AllocationOutcome& a);

/// m_n(b, a) for quantized pi_n, row-major. Throws QuantizationError when a
/// value is not an integer.
std::vector<std::int64_t> edge_budget(const PairMeasure& pi_n, std::int64_t n);

/// Throws FeasibilityError naming the first symbol pair whose edge budget
/// exceeds the available vertex pairs.
void require_graph_feasible(const QuantizedTargets& t);

/// Throws FeasibilityError if balls are addressed to a symbol with no bins.
void require_allocation_feasible(const QuantizedTargets& t);

ColoredGraph sample_colored_graph(const GraphParams& params, Rng& rng);

ColoredGraph sample_conditional_graph(const QuantizedTargets& t, Rng& rng);
ColoredGraph sample_conditional_graph(const SymbolMeasure& nu_n, const PairMeasure& pi_n,
                                      std::int64_t n, Rng& rng);

AllocationOutcome sample_allocation(const QuantizedTargets& t, Rng& rng);
AllocationOutcome sample_allocation(const SymbolMeasure& nu_n, const PairMeasure& pi_n,
                                    std::int64_t n, Rng& rng);

CoupledSample sample_coupled(const QuantizedTargets& t, Rng& rng);
CoupledSample sample_coupled(const SymbolMeasure& nu_n, const PairMeasure& pi_n, std::int64_t n,
                             Rng& rng);

/// Heuristic redraw probability p_[k](b, a) at step k. It ignores the bin
/// counts, so it is only a diagnostic; see the coupling tests for measured
/// rates.
double collision_prob(std::int64_t k, std::size_t b, std::size_t a, std::int64_t m_n);

}  // namespace ldp
