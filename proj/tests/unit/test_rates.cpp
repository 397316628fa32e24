#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ldp/rates.hpp"
#include "oracles.hpp"

using namespace ldp;

namespace {

const Alphabet kOne = Alphabet::letters(1);

double bisect_root(double x, double c) {
  const double target = (1.0 - x) / c;
  double lo = 1e-12;
  double hi = 1.0;
  while (lambda_map(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lambda_map(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Random degree measure with d(0) = x and mean c: a two-point mixture
// on {k1, k2} with k1 < c/(1-x) < k2, weights solving the mean constraint.
DegreeMeasure random_feasible(std::mt19937_64& gen, double x, double c) {
  const double target = c / (1.0 - x);
  const int lo = static_cast<int>(std::floor(target));
  std::uniform_int_distribution<int> below(1, std::max(1, lo));
  std::uniform_int_distribution<int> above(lo + 1, lo + 6);
  const int k1 = below(gen);
  const int k2 = above(gen);
  const double w2 = (target - k1) / (k2 - k1);
  std::vector<double> d(static_cast<std::size_t>(k2) + 1, 0.0);
  d[0] = x;
  d[static_cast<std::size_t>(k1)] += (1.0 - x) * (1.0 - w2);
  d[static_cast<std::size_t>(k2)] += (1.0 - x) * w2;
  return DegreeMeasure(d);
}

}  // namespace

TEST(RateNeighbourhood, TruncatedPoissonIsNearZero) {
  const auto al = Alphabet::letters(2);
  const SymbolMeasure nu(al, {0.4, 0.6});
  const PairMeasure pi(al, {1.0, 0.6, 0.6, 1.2});
  std::map<ProfileKey, double> w;
  double mass = 0.0;
  for (std::uint32_t i = 0; i <= 40; ++i) {
    for (std::uint32_t j = 0; i + j <= 40; ++j) {
      for (std::uint32_t a = 0; a < 2; ++a) {
        const double p = poi_mass(nu, pi, a, LocalProfile({i, j}));
        if (p > 0.0) {
          w[ProfileKey{a, LocalProfile({i, j})}] = p;
          mass += p;
        }
      }
    }
  }
  const auto r = rate_neighbourhood(NeighbourhoodMeasure(al, w), nu, pi);
  ASSERT_TRUE(r.is_finite());
  EXPECT_LE(std::fabs(r.value() - mass * std::log(mass)), 1e-9);
}

TEST(RateNeighbourhood, Examples) {
  const SymbolMeasure nu(kOne, {1.0});
  const PairMeasure pi(kOne, {1.0});
  const NeighbourhoodMeasure one(kOne, {{ProfileKey{0, LocalProfile({1})}, 1.0}});
  EXPECT_NEAR(rate_neighbourhood(one, nu, pi).value(), 1.0, 1e-15);

  const auto al = Alphabet::letters(2);
  const NeighbourhoodMeasure skewed(al, {{ProfileKey{0, LocalProfile({0, 0})}, 1.0}});
  EXPECT_TRUE(rate_neighbourhood(skewed, SymbolMeasure(al, {0.5, 0.5}), PairMeasure::zero(al)).is_infinite());

  // Delta2 exceeds pi: neither consistent nor sub-consistent.
  const NeighbourhoodMeasure heavy(kOne, {{ProfileKey{0, LocalProfile({2})}, 1.0}});
  EXPECT_TRUE(rate_neighbourhood(heavy, nu, pi).is_infinite());
}

TEST(RateDegree, Examples) {
  EXPECT_LE(rate_degree(poisson_degree_measure(2.0), 2.0).value(), 1e-9);
  EXPECT_NEAR(rate_degree(DegreeMeasure({0.0, 1.0}), 1.0).value(), 1.0, 1e-15);
  EXPECT_TRUE(rate_degree(DegreeMeasure({0.5, 0.5}), 1.0).is_infinite());
}

TEST(LambdaRoot, Anchors) {
  for (double c : {0.5, 1.0, 2.0}) {
    const auto l = lambda_root(std::exp(-c), c);
    EXPECT_NEAR(l.value(), c, 1e-10) << c;
  }
  EXPECT_EQ(lambda_root(0.5, 0.5).value(), 0.0);
  EXPECT_TRUE(lambda_root(1.0, 1.0).is_infinite());
  EXPECT_THROW(lambda_root(0.2, 0.5), DomainError);
  EXPECT_THROW(lambda_root(1.1, 1.0), DomainError);
}

TEST(LambdaRoot, MatchesBisection) {
  EXPECT_NEAR(lambda_root(0.5, 1.0).value(), 1.593624260040, 1e-12);
  for (double c : {0.5, 1.0, 2.0, 4.0}) {
    for (double x = std::max(0.0, 1.0 - c) + 0.01; x < 0.995; x += 0.0317) {
      const double l = lambda_root(x, c).value();
      EXPECT_NEAR(l, bisect_root(x, c), 1e-9 * std::max(1.0, l));
      EXPECT_LE(std::fabs(lambda_map(l) - (1.0 - x) / c), 1e-12);
    }
  }
}

TEST(Minimizer, Boundaries) {
  const auto q = poisson_degree_measure(1.5);
  const auto d = minimizer_degree_profile(std::exp(-1.5), 1.5);
  EXPECT_LE(total_variation(d, q), 1e-12);

  const auto lim = minimizer_degree_profile(0.25, 0.75);
  EXPECT_EQ(lim.support_end(), 2u);
  EXPECT_DOUBLE_EQ(lim[0], 0.25);
  EXPECT_DOUBLE_EQ(lim[1], 0.75);
}

TEST(Minimizer, Invariants) {
  for (double c : {0.5, 1.0, 3.0}) {
    for (double x = std::max(0.0, 1.0 - c) + 0.02; x < 0.98; x += 0.07) {
      const auto d = minimizer_degree_profile(x, c);
      double tail = 0.0;
      for (std::size_t k = 1; k < d.support_end(); ++k) tail += d[k];
      EXPECT_EQ(d[0], x);
      EXPECT_NEAR(tail, 1.0 - x, 1e-10);
      EXPECT_NEAR(d.mean(), c, 1e-8);
    }
  }
}

TEST(Minimizer, AgreesWithConstrainedOptimum) {
  const auto r = rate_isolated(0.5, 1.0);
  const auto o = oracle::constrained_entropy_min(0.5, 1.0);
  EXPECT_NEAR(r.value.value(), o.value, 1e-6);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR((*r.minimizer)[k], o.d[k], 1e-6) << k;
  const double lambda = r.lambda->value();
  EXPECT_NEAR((*r.minimizer)[1], 0.5 * lambda / std::expm1(lambda), 1e-12);
}

TEST(RateIsolated, AnchorsAndBoundaries) {
  for (double c : {0.5, 1.0, 2.0, 4.0}) {
    const auto r = rate_isolated(std::exp(-c), c);
    EXPECT_LE(std::fabs(r.value.value()), 1e-10) << c;
    EXPECT_GT(rate_isolated(std::exp(-c) + 0.05, c).value.value(), 0.0);
    if (std::exp(-c) > 0.05) EXPECT_GT(rate_isolated(std::exp(-c) - 0.05, c).value.value(), 0.0);
  }
  const auto below = rate_isolated(0.2, 0.5);
  EXPECT_TRUE(below.value.is_infinite());
  EXPECT_FALSE(below.lambda.has_value());
  EXPECT_TRUE(rate_isolated(1.0, 1.0).value.is_infinite());
  EXPECT_TRUE(rate_isolated(1.0, 1.0).lambda->is_infinite());

  const auto edge = rate_isolated(0.5, 0.5);
  EXPECT_NEAR(edge.value.value(), 0.5 * (std::log(0.5) + 0.5) + 0.5 * (std::log(0.5) + 0.5 - std::log(0.5)), 1e-14);
}

TEST(RateIsolated, ValueIsEntropyOfMinimizer) {
  for (double x : {0.1, 0.4, 0.55, 0.8}) {
    const auto r = rate_isolated(x, 1.0);
    EXPECT_NEAR(r.value.value(), rate_degree(*r.minimizer, 1.0).value(), 1e-10);
  }
}

TEST(RateIsolated, ClosedFormMatchesOnlyAtZero) {
  const auto at_zero = rate_isolated(std::exp(-1.0), 1.0);
  EXPECT_NEAR(at_zero.closed_form, 0.0, 1e-10);
  const auto away = rate_isolated(0.55, 1.0);
  EXPECT_GT(std::fabs(away.closed_form - away.value.value()), 1e-4);
  EXPECT_TRUE(std::isnan(rate_isolated(0.2, 0.5).closed_form));
}

TEST(RateIsolated, Convexity) {
  std::mt19937_64 gen(41);
  for (double c : {0.5, 1.0, 2.0}) {
    std::uniform_real_distribution<double> u(std::max(0.0, 1.0 - c) + 1e-3, 0.999);
    for (int i = 0; i < 100; ++i) {
      const double a = u(gen);
      const double b = u(gen);
      const double mid = rate_isolated(0.5 * (a + b), c).value.value();
      const double avg = 0.5 * (rate_isolated(a, c).value.value() + rate_isolated(b, c).value.value());
      EXPECT_LE(mid, avg + 1e-9);
    }
  }
}

TEST(RateIsolated, LowerEnvelopeOfFeasibleProfiles) {
  std::mt19937_64 gen(43);
  for (double c : {0.5, 1.0, 2.5}) {
    for (double x = std::max(0.0, 1.0 - c) + 0.03; x < 0.95; x += 0.1) {
      const double eta = rate_isolated(x, c).value.value();
      for (int i = 0; i < 20; ++i) {
        const auto d = random_feasible(gen, x, c);
        ASSERT_NEAR(d.mean(), c, 1e-10);
        EXPECT_LE(eta, rate_degree(d, c).value() + 1e-8);
      }
    }
  }
}

TEST(Bennett, Examples) {
  EXPECT_EQ(bennett_h(0.0), 0.0);
  EXPECT_NEAR(bennett_h(std::exp(1.0) - 1.0), 1.0, 1e-15);
  EXPECT_NEAR(bennett_h(1.0), 2.0 * std::log(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(bennett_tail(1.5, 1e-9), 1.0, 1e-12);
  EXPECT_NEAR(bennett_tail(1.5, 3.0), std::exp(-1.5 * bennett_h(2.0)), 1e-15);
  double prev = 1.0;
  for (double t = 0.1; t < 10.0; t += 0.1) {
    const double b = bennett_tail(2.0, t);
    EXPECT_LT(b, prev);
    prev = b;
  }
}
