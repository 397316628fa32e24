#pragma once

// Monte Carlo harness: event frequencies per n with Wilson intervals and a
// decay-rate fit, coupling probes and a law-of-large-numbers check.
//
// Work for each n is cut into fixed-size chunks; chunk j at size n draws
// from Rng(seed, {n, j}). Chunks are handed to workers in any order and
// reduced with integer sums, so results do not depend on the worker count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ldp/measures.hpp"
#include "ldp/samplers.hpp"

namespace ldp {

enum class Model { Conditional, Allocation, Coupled, Bernoulli };

std::string_view to_string(Model m);
/// "conditional", "allocation", "coupled", "bernoulli"; FormatError otherwise.
Model parse_model(std::string_view s);

struct EventSpec {
  enum class Kind {
    Always,
    IsolatedAtLeast,   // D(0) >= threshold
    IsolatedAbove,     // D(0) > threshold
    DegreeWithinTv,    // TV(D, target) <= threshold
    CouplingDistance,  // TV(M_graph, M_allocation) >= threshold; coupled model only
  };
  Kind kind = Kind::Always;
  double threshold = 0.0;
  std::optional<DegreeMeasure> target;

  static EventSpec always() { return {}; }
  static EventSpec isolated_at_least(double x) { return {Kind::IsolatedAtLeast, x, {}}; }
  static EventSpec isolated_above(double x) { return {Kind::IsolatedAbove, x, {}}; }
  static EventSpec degree_within_tv(DegreeMeasure d, double r) { return {Kind::DegreeWithinTv, r, std::move(d)}; }
  static EventSpec coupling_distance(double eps) { return {Kind::CouplingDistance, eps, {}}; }

  std::string describe() const;
};

struct ExperimentConfig {
  Model model = Model::Conditional;
  /// Targets before quantization; quantize() is applied per n.
  SymbolMeasure nu;
  PairMeasure pi;
  std::vector<std::int64_t> n_grid;
  std::int64_t samples_per_n = 1;
  std::uint64_t seed = 0;
  EventSpec event;
  unsigned workers = 1;
  std::int64_t chunk = 4096;
};

/// Throws DomainError for an empty or non-increasing grid, samples < 1, or
/// an event that does not fit the model.
void validate_config(const ExperimentConfig& cfg);

struct DecayRow {
  std::int64_t n = 0;
  std::int64_t hits = 0;
  std::int64_t total = 0;
  double p_hat = 0.0;
  /// -(1/n) log p_hat; unset when censored.
  std::optional<double> rate;
  /// Zero hits: only a lower bound on the rate is available.
  bool censored = false;
  /// -(1/n) log of the Wilson upper limit.
  double rate_lower_bound = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  /// |pi_n| after quantization, i.e. the mean degree actually simulated.
  double effective_c = 0.0;
};

/// rate(n) ~ intercept + slope / n over uncensored rows.
struct DecaySummary {
  std::size_t points = 0;
  double intercept = 0.0;
  double slope = 0.0;
  /// Standard error of the intercept; NaN with fewer than three points.
  double intercept_se = 0.0;
  bool available() const { return points >= 2; }
};

struct DecayEstimate {
  std::vector<DecayRow> rows;
  DecaySummary summary;
};

struct WilsonInterval {
  double lo;
  double hi;
};

/// 95% Wilson score interval for `hits` successes out of `total`.
WilsonInterval wilson_interval(std::int64_t hits, std::int64_t total);

DecayRow make_row(std::int64_t n, std::int64_t hits, std::int64_t total, double effective_c);
DecaySummary fit_decay(const std::vector<DecayRow>& rows);

DecayEstimate estimate_event_rate(const ExperimentConfig& cfg);

struct CouplingProbeResult {
  DecayEstimate estimate;
  /// Per n: mean and standard deviation of the redraw count summed over
  /// unordered symbol pairs.
  std::vector<double> mean_redraws;
  std::vector<double> sd_redraws;
  /// Per n: mean B(b, a), row-major.
  std::vector<std::vector<double>> mean_discrepancy;
};

CouplingProbeResult coupling_probe(const SymbolMeasure& nu, const PairMeasure& pi,
                                   const std::vector<std::int64_t>& n_grid, double eps,
                                   std::int64_t samples, std::uint64_t seed,
                                   unsigned workers = 1);

/// TV(mean of M_allocation over `samples` draws, Poi_n), with the Poisson
/// mass outside the observed support counted in full.
double lln_probe(const SymbolMeasure& nu, const PairMeasure& pi, std::int64_t n,
                 std::int64_t samples, std::uint64_t seed, unsigned workers = 1);

/// Connection kernel C(a, b) = pi(a, b) / (nu(a) nu(b)), so that the
/// Bernoulli model has E L2 -> pi.
PairMeasure bernoulli_kernel(const SymbolMeasure& nu, const PairMeasure& pi);

// --- persistence ------------------------------------------------------------

/// One row per n; LF line endings, '.' decimals, empty cells for unset values.
std::string decay_csv(const DecayEstimate& e);

nlohmann::json to_json(const DecayEstimate& e);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// SHA-1 of "blob <size>\0<content>", hex encoded (the git object id).
std::string git_blob_sha1(std::string_view content);

/// Write to a temporary sibling, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct RunManifest {
  std::string subcommand;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
};

/// Writes manifest.json into `dir`, last and atomically. The inputs hash is
/// the git blob id of the canonical parameter dump.
void write_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace ldp
