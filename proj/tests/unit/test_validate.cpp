#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "ldp/validate.hpp"

using namespace ldp;

namespace {

ExperimentConfig single_color_config(Model model, EventSpec event) {
  const auto [nu, pi] = single_color_targets(1.0);
  ExperimentConfig cfg{model, nu, pi, {20, 30}, 3000, 77, std::move(event)};
  cfg.chunk = 500;
  return cfg;
}

}  // namespace

TEST(Model, ParseRoundTrip) {
  for (auto m : {Model::Conditional, Model::Allocation, Model::Coupled, Model::Bernoulli}) {
    EXPECT_EQ(parse_model(to_string(m)), m);
  }
  EXPECT_THROW(parse_model("gnp"), FormatError);
}

TEST(Config, Rejections) {
  auto cfg = single_color_config(Model::Conditional, EventSpec::always());
  EXPECT_NO_THROW(validate_config(cfg));
  cfg.n_grid = {30, 20};
  EXPECT_THROW(validate_config(cfg), DomainError);
  cfg.n_grid = {};
  EXPECT_THROW(validate_config(cfg), DomainError);
  cfg = single_color_config(Model::Conditional, EventSpec::coupling_distance(0.1));
  EXPECT_THROW(validate_config(cfg), DomainError);
  cfg = single_color_config(Model::Conditional, EventSpec::always());
  cfg.samples_per_n = 0;
  EXPECT_THROW(validate_config(cfg), DomainError);
}

TEST(Wilson, KnownValues) {
  const auto w = wilson_interval(50, 100);
  EXPECT_NEAR(w.lo, 0.40383153, 1e-7);
  EXPECT_NEAR(w.hi, 0.59616847, 1e-7);
  const auto z = wilson_interval(0, 1000);
  EXPECT_EQ(z.lo, 0.0);
  EXPECT_NEAR(z.hi, 0.0038268, 1e-6);
  EXPECT_EQ(wilson_interval(10, 10).hi, 1.0);
  EXPECT_THROW(wilson_interval(3, 2), DomainError);
}

TEST(Wilson, CoverageOnSyntheticStreams) {
  std::mt19937_64 gen(123);
  for (double p : {0.05, 0.3, 0.5}) {
    std::bernoulli_distribution coin(p);
    int covered = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
      int hits = 0;
      for (int i = 0; i < 400; ++i) hits += coin(gen) ? 1 : 0;
      const auto w = wilson_interval(hits, 400);
      covered += (w.lo <= p && p <= w.hi) ? 1 : 0;
    }
    EXPECT_NEAR(covered / static_cast<double>(reps), 0.95, 0.02) << p;
  }
}

TEST(DecayRow, CensoringIsExplicit) {
  const auto r = make_row(50, 0, 1000, 1.0);
  EXPECT_TRUE(r.censored);
  EXPECT_FALSE(r.rate.has_value());
  EXPECT_GT(r.rate_lower_bound, 0.0);
  const auto s = make_row(50, 1000, 1000, 1.0);
  EXPECT_EQ(*s.rate, 0.0);
  EXPECT_FALSE(std::signbit(*s.rate));
}

TEST(FitDecay, RecoversLine) {
  std::vector<DecayRow> rows;
  for (std::int64_t n : {10, 20, 40, 80}) {
    DecayRow r;
    r.n = n;
    r.rate = 0.2 + 1.5 / static_cast<double>(n);
    rows.push_back(r);
  }
  rows.push_back(make_row(160, 0, 10, 1.0));
  const auto s = fit_decay(rows);
  EXPECT_EQ(s.points, 4u);
  EXPECT_NEAR(s.intercept, 0.2, 1e-12);
  EXPECT_NEAR(s.slope, 1.5, 1e-10);
  EXPECT_NEAR(s.intercept_se, 0.0, 1e-10);
  EXPECT_FALSE(fit_decay({rows[0]}).available());
}

TEST(Estimate, AlwaysAndImpossibleEvents) {
  for (auto model : {Model::Conditional, Model::Allocation, Model::Coupled, Model::Bernoulli}) {
    const auto yes = estimate_event_rate(single_color_config(model, EventSpec::always()));
    for (const auto& r : yes.rows) EXPECT_EQ(*r.rate, 0.0);
    const auto no = estimate_event_rate(single_color_config(model, EventSpec::isolated_above(1.0)));
    for (const auto& r : no.rows) EXPECT_TRUE(r.censored);
  }
}

TEST(Estimate, IndependentOfWorkerCount) {
  auto cfg = single_color_config(Model::Conditional, EventSpec::isolated_at_least(0.45));
  const auto one = estimate_event_rate(cfg);
  cfg.workers = 4;
  const auto four = estimate_event_rate(cfg);
  EXPECT_EQ(to_json(one).dump(), to_json(four).dump());
  EXPECT_EQ(decay_csv(one), decay_csv(four));
  ASSERT_EQ(one.rows.size(), 2u);
  EXPECT_GT(one.rows[0].hits, 0);
  EXPECT_EQ(one.rows[1].effective_c, 1.0);
}

TEST(Estimate, DegreeWithinTvOfPoisson) {
  auto cfg = single_color_config(Model::Allocation, EventSpec::degree_within_tv(poisson_degree_measure(1.0), 0.3));
  cfg.n_grid = {200};
  cfg.samples_per_n = 200;
  const auto e = estimate_event_rate(cfg);
  EXPECT_EQ(e.rows[0].hits, 200);
}

TEST(CouplingProbe, ImpossibleThresholdIsCensored) {
  const auto [nu, pi] = single_color_targets(1.0);
  const auto r = coupling_probe(nu, pi, {20, 40}, 2.0, 500, 5);
  for (const auto& row : r.estimate.rows) EXPECT_TRUE(row.censored);
  ASSERT_EQ(r.mean_redraws.size(), 2u);
  EXPECT_GE(r.mean_redraws[0], 0.0);
  EXPECT_EQ(r.mean_discrepancy[0].size(), 1u);
  EXPECT_EQ(r.mean_discrepancy[0][0], r.mean_redraws[0]);
}

TEST(Lln, ZeroKernelAndConvergence) {
  const auto al = Alphabet::letters(2);
  EXPECT_NEAR(lln_probe(SymbolMeasure(al, {0.5, 0.5}), PairMeasure::zero(al), 40, 20, 1), 0.0, 1e-15);
  const auto [nu, pi] = single_color_targets(1.0);
  double prev = 1.0;
  for (std::int64_t n : {50, 200, 800}) {
    const double d = lln_probe(nu, pi, n, 200, 3);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(lln_probe(nu, pi, 2000, 200, 3), 0.02);
}

TEST(BernoulliKernel, DividesByMarginals) {
  const auto al = Alphabet::letters(2);
  const auto k = bernoulli_kernel(SymbolMeasure(al, {0.25, 0.75}), PairMeasure(al, {0.5, 0.3, 0.3, 0.9}));
  EXPECT_DOUBLE_EQ(k(0, 0), 8.0);
  EXPECT_DOUBLE_EQ(k(0, 1), 1.6);
  EXPECT_DOUBLE_EQ(k(1, 1), 1.6);
}

TEST(Persist, GitBlobIds) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Persist, CsvShape) {
  DecayEstimate e;
  e.rows.push_back(make_row(10, 0, 100, 1.0));
  e.rows.push_back(make_row(20, 5, 100, 1.0));
  const auto csv = decay_csv(e);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "n,hits,total,p_hat,rate,censored,rate_lower_bound,wilson_lo,wilson_hi,effective_c");
  EXPECT_NE(csv.find("\n10,0,100,0,,1,"), std::string::npos);
}

TEST(Persist, ManifestWrittenAtomically) {
  const auto dir = std::filesystem::temp_directory_path() / "ldp_manifest_test";
  std::filesystem::create_directories(dir);
  RunManifest m{"rate", {{"x", 0.5}}, 3, "test", {"rate.json"}, 0.25};
  write_manifest(m, dir);
  EXPECT_FALSE(std::filesystem::exists(dir / "manifest.json.tmp"));
  std::ifstream f(dir / "manifest.json");
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["inputs_hash"], git_blob_sha1(nlohmann::json({{"x", 0.5}}).dump()));
  EXPECT_EQ(j["outputs"][0], "rate.json");
  std::filesystem::remove_all(dir);
}
