#include <cmath>

#include "internal.hpp"

namespace ldp {

CouplingProbeResult coupling_probe(const SymbolMeasure& nu, const PairMeasure& pi,
                                   const std::vector<std::int64_t>& n_grid, double eps,
                                   std::int64_t samples, std::uint64_t seed, unsigned workers) {
  if (!(eps > 0.0)) throw DomainError("coupling_probe: eps must be positive");
  ExperimentConfig cfg{Model::Coupled, nu, pi, n_grid, samples, seed,
                       EventSpec::coupling_distance(eps), workers, 4096};
  validate_config(cfg);
  const std::size_t m = nu.alphabet().size();

  struct Tally {
    std::int64_t hits = 0;
    std::int64_t redraws = 0;
    std::int64_t redraws_sq = 0;
    std::vector<std::int64_t> entries;
  };

  CouplingProbeResult out;
  for (const auto n : n_grid) {
    const detail::Setting setting = detail::make_setting(cfg, n);
    const auto tallies = detail::run_chunks<Tally>(
        samples, cfg.chunk, workers, [&](std::int64_t j, std::int64_t count) {
          Rng rng(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(j)});
          Tally t;
          t.entries.assign(m * m, 0);
          for (std::int64_t i = 0; i < count; ++i) {
            const auto d = detail::draw(setting, cfg.event, rng);
            t.hits += detail::holds(cfg.event, d, n) ? 1 : 0;
            t.redraws += d.redraws;
            t.redraws_sq += d.redraws * d.redraws;
            for (std::size_t k = 0; k < m * m; ++k) t.entries[k] += d.discrepancies[k];
          }
          return t;
        });
    Tally sum;
    sum.entries.assign(m * m, 0);
    for (const auto& t : tallies) {
      sum.hits += t.hits;
      sum.redraws += t.redraws;
      sum.redraws_sq += t.redraws_sq;
      for (std::size_t k = 0; k < m * m; ++k) sum.entries[k] += t.entries[k];
    }
    const auto total = static_cast<double>(samples);
    const double mean = static_cast<double>(sum.redraws) / total;
    const double var = samples > 1 ? (static_cast<double>(sum.redraws_sq) - total * mean * mean) /
                                         (total - 1.0)
                                   : 0.0;
    out.estimate.rows.push_back(make_row(n, sum.hits, samples, setting.targets.pi().total_mass()));
    out.mean_redraws.push_back(mean);
    out.sd_redraws.push_back(std::sqrt(std::max(0.0, var)));
    std::vector<double> means(m * m);
    for (std::size_t k = 0; k < m * m; ++k) means[k] = static_cast<double>(sum.entries[k]) / total;
    out.mean_discrepancy.push_back(std::move(means));
  }
  out.estimate.summary = fit_decay(out.estimate.rows);
  return out;
}

double lln_probe(const SymbolMeasure& nu, const PairMeasure& pi, std::int64_t n,
                 std::int64_t samples, std::uint64_t seed, unsigned workers) {
  if (samples < 1) throw DomainError("lln_probe: samples must be at least 1");
  const QuantizedTargets t = quantize(nu, pi, n);
  require_allocation_feasible(t);
  using Counts = std::map<ProfileKey, std::int64_t>;
  const auto parts = detail::run_chunks<Counts>(samples, 4096, workers, [&](std::int64_t j, std::int64_t count) {
    Rng rng(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(j)});
    Counts c;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto a = sample_allocation(t, rng);
      for (std::size_t v = 0; v < a.symbols.size(); ++v) ++c[ProfileKey{a.symbols[v], a.profiles[v]}];
    }
    return c;
  });
  Counts total;
  for (const auto& part : parts) {
    for (const auto& [k, c] : part) total[k] += c;
  }

  const SymbolMeasure nu_n = t.nu();
  const PairMeasure pi_n = t.pi();
  const double denom = static_cast<double>(n) * static_cast<double>(samples);
  double l1 = 0.0;
  double poi_on_support = 0.0;
  for (const auto& [k, c] : total) {
    const double p = poi_mass(nu_n, pi_n, k.symbol, k.profile);
    l1 += std::fabs(static_cast<double>(c) / denom - p);
    poi_on_support += p;
  }
  return 0.5 * (l1 + std::max(0.0, 1.0 - poi_on_support));
}

}  // namespace ldp
