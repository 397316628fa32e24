#include <cmath>
#include <limits>

#include "internal.hpp"

namespace ldp {
namespace {

// Two-sided 95% normal quantile.
constexpr double kZ95 = 1.959963984540054;

}  // namespace

WilsonInterval wilson_interval(std::int64_t hits, std::int64_t total) {
  if (total < 1 || hits < 0 || hits > total) throw DomainError("wilson_interval: need 0 <= hits <= total, total >= 1");
  const auto n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  // Clamp so the interval always contains p_hat despite rounding at 0 and 1.
  return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

DecayRow make_row(std::int64_t n, std::int64_t hits, std::int64_t total, double effective_c) {
  DecayRow r;
  r.n = n;
  r.hits = hits;
  r.total = total;
  r.effective_c = effective_c;
  r.p_hat = static_cast<double>(hits) / static_cast<double>(total);
  const auto w = wilson_interval(hits, total);
  r.wilson_lo = w.lo;
  r.wilson_hi = w.hi;
  const auto dn = static_cast<double>(n);
  r.rate_lower_bound = -std::log(w.hi) / dn + 0.0;
  r.censored = hits == 0;
  if (!r.censored) r.rate = -std::log(r.p_hat) / dn + 0.0;
  return r;
}

DecaySummary fit_decay(const std::vector<DecayRow>& rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (!r.rate) continue;
    xs.push_back(1.0 / static_cast<double>(r.n));
    ys.push_back(*r.rate);
  }
  DecaySummary s;
  s.points = xs.size();
  s.intercept_se = std::numeric_limits<double>::quiet_NaN();
  if (s.points == 1) s.intercept = ys[0];
  if (s.points < 2) return s;
  const auto k = static_cast<double>(s.points);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  s.slope = sxy / sxx;
  s.intercept = my - s.slope * mx;
  if (s.points >= 3) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - s.intercept - s.slope * xs[i];
      rss += e * e;
    }
    const double sigma2 = rss / (k - 2.0);
    s.intercept_se = std::sqrt(sigma2 * (1.0 / k + mx * mx / sxx));
  }
  return s;
}

DecayEstimate estimate_event_rate(const ExperimentConfig& cfg) {
  validate_config(cfg);
  DecayEstimate out;
  for (const auto n : cfg.n_grid) {
    const detail::Setting setting = detail::make_setting(cfg, n);
    const auto hits = detail::run_chunks<std::int64_t>(
        cfg.samples_per_n, cfg.chunk, cfg.workers, [&](std::int64_t j, std::int64_t count) {
          Rng rng(cfg.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(j)});
          std::int64_t h = 0;
          for (std::int64_t i = 0; i < count; ++i) {
            h += detail::holds(cfg.event, detail::draw(setting, cfg.event, rng), n) ? 1 : 0;
          }
          return h;
        });
    std::int64_t total_hits = 0;
    for (auto h : hits) total_hits += h;
    const double c = cfg.model == Model::Bernoulli ? cfg.pi.total_mass()
                                                   : setting.targets.pi().total_mass();
    out.rows.push_back(make_row(n, total_hits, cfg.samples_per_n, c));
  }
  out.summary = fit_decay(out.rows);
  return out;
}

}  // namespace ldp
