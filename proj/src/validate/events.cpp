#include <cmath>
#include <cstdlib>
#include <sstream>

#include "internal.hpp"

namespace ldp {
namespace {

std::vector<std::int64_t> degrees(const ColoredGraph& g) {
  std::vector<std::int64_t> deg(g.symbols.size(), 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

std::int64_t count_zero(const std::vector<std::int64_t>& deg) {
  std::int64_t z = 0;
  for (auto d : deg) z += d == 0 ? 1 : 0;
  return z;
}

// Exact (1/2n) sum |c - c'| over the union of supports.
double profile_tv(const ProfileCounts& x, const ProfileCounts& y) {
  std::int64_t diff = 0;
  auto i = x.counts().begin();
  auto j = y.counts().begin();
  while (i != x.counts().end() || j != y.counts().end()) {
    if (j == y.counts().end() || (i != x.counts().end() && i->first < j->first)) {
      diff += i++->second;
    } else if (i == x.counts().end() || j->first < i->first) {
      diff += j++->second;
    } else {
      diff += std::llabs(i++->second - j++->second);
    }
  }
  return static_cast<double>(diff) / (2.0 * static_cast<double>(x.n()));
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::Conditional:
      return "conditional";
    case Model::Allocation:
      return "allocation";
    case Model::Coupled:
      return "coupled";
    case Model::Bernoulli:
      return "bernoulli";
  }
  return "?";
}

Model parse_model(std::string_view s) {
  for (auto m : {Model::Conditional, Model::Allocation, Model::Coupled, Model::Bernoulli}) {
    if (s == to_string(m)) return m;
  }
  throw FormatError("unknown model '" + std::string(s) +
                    "' (expected conditional, allocation, coupled or bernoulli)");
}

std::string EventSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Always:
      return "always";
    case Kind::IsolatedAtLeast:
      os << "isolated>=" << threshold;
      break;
    case Kind::IsolatedAbove:
      os << "isolated>" << threshold;
      break;
    case Kind::DegreeWithinTv:
      os << "degree-tv<=" << threshold;
      break;
    case Kind::CouplingDistance:
      os << "coupling-tv>=" << threshold;
      break;
  }
  return os.str();
}

void validate_config(const ExperimentConfig& cfg) {
  require_same_alphabet(cfg.nu.alphabet(), cfg.pi.alphabet(), "ExperimentConfig");
  if (cfg.n_grid.empty()) throw DomainError("nGrid must not be empty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) throw DomainError("nGrid entries must be positive");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
      throw DomainError("nGrid must be strictly increasing");
    }
  }
  if (cfg.samples_per_n < 1) throw DomainError("samplesPerN must be at least 1");
  if (cfg.chunk < 1) throw DomainError("chunk size must be at least 1");
  if (cfg.event.kind == EventSpec::Kind::CouplingDistance && cfg.model != Model::Coupled) {
    throw DomainError("the coupling-distance event needs the coupled model");
  }
  if (cfg.event.kind == EventSpec::Kind::DegreeWithinTv && !cfg.event.target) {
    throw DomainError("the degree TV-ball event needs a target degree measure");
  }
}

PairMeasure bernoulli_kernel(const SymbolMeasure& nu, const PairMeasure& pi) {
  require_same_alphabet(nu.alphabet(), pi.alphabet(), "bernoulli_kernel");
  const std::size_t m = nu.alphabet().size();
  std::vector<double> k(m * m, 0.0);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      if (nu[a] > 0.0 && nu[b] > 0.0) k[b * m + a] = pi(b, a) / (nu[a] * nu[b]);
    }
  }
  return PairMeasure(nu.alphabet(), std::move(k));
}

namespace detail {

Setting make_setting(const ExperimentConfig& cfg, std::int64_t n) {
  Setting s{cfg.model, quantize(cfg.nu, cfg.pi, n), std::nullopt};
  switch (cfg.model) {
    case Model::Conditional:
      require_graph_feasible(s.targets);
      break;
    case Model::Allocation:
      require_allocation_feasible(s.targets);
      break;
    case Model::Coupled:
      require_graph_feasible(s.targets);
      require_allocation_feasible(s.targets);
      break;
    case Model::Bernoulli:
      s.bernoulli = GraphParams{n, cfg.nu, bernoulli_kernel(cfg.nu, cfg.pi)};
      break;
  }
  return s;
}

Draw draw(const Setting& s, const EventSpec& event, Rng& rng) {
  const bool want_degree = event.kind == EventSpec::Kind::DegreeWithinTv;
  Draw d;
  auto from_graph = [&](const ColoredGraph& g) {
    if (want_degree) {
      const auto e = empirical_measures(g);
      d.isolated = e.isolated();
      d.degree = e.degree();
    } else {
      d.isolated = count_zero(degrees(g));
    }
  };
  switch (s.model) {
    case Model::Conditional:
      from_graph(sample_conditional_graph(s.targets, rng));
      break;
    case Model::Bernoulli:
      from_graph(sample_colored_graph(*s.bernoulli, rng));
      break;
    case Model::Allocation: {
      const auto a = sample_allocation(s.targets, rng);
      if (want_degree) {
        const auto e = empirical_measures(a);
        d.isolated = e.isolated();
        d.degree = e.degree();
      } else {
        for (const auto& p : a.profiles) d.isolated += p.degree() == 0 ? 1 : 0;
      }
      break;
    }
    case Model::Coupled: {
      const auto c = sample_coupled(s.targets, rng);
      from_graph(c.graph);
      d.discrepancies = c.discrepancies;
      d.redraws = c.total_redraws();
      if (event.kind == EventSpec::Kind::CouplingDistance && d.redraws > 0) {
        d.coupling_tv = profile_tv(empirical_measures(c.graph).profiles,
                                   empirical_measures(c.allocation).profiles);
      }
      break;
    }
  }
  return d;
}

bool holds(const EventSpec& event, const Draw& d, std::int64_t n) {
  const double iso = static_cast<double>(d.isolated) / static_cast<double>(n);
  switch (event.kind) {
    case EventSpec::Kind::Always:
      return true;
    case EventSpec::Kind::IsolatedAtLeast:
      return iso >= event.threshold;
    case EventSpec::Kind::IsolatedAbove:
      return iso > event.threshold;
    case EventSpec::Kind::DegreeWithinTv:
      return total_variation(*d.degree, *event.target) <= event.threshold;
    case EventSpec::Kind::CouplingDistance:
      return d.coupling_tv >= event.threshold;
  }
  return false;
}

}  // namespace detail
}  // namespace ldp
