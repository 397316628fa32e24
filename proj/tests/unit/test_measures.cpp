#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ldp/measures.hpp"

using namespace ldp;

namespace {

const Alphabet kOne = Alphabet::letters(1);
const Alphabet kTwo = Alphabet::letters(2);

ProfileKey key(std::uint32_t a, std::vector<std::uint32_t> l) { return {a, LocalProfile(std::move(l))}; }

NeighbourhoodMeasure random_measure(std::mt19937_64& gen, const Alphabet& al, int points, int max_count) {
  std::uniform_int_distribution<int> cnt(0, max_count);
  std::uniform_int_distribution<std::uint32_t> sym(0, static_cast<std::uint32_t>(al.size() - 1));
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::map<ProfileKey, double> raw;
  for (int i = 0; i < points; ++i) {
    std::vector<std::uint32_t> l(al.size());
    for (auto& x : l) x = static_cast<std::uint32_t>(cnt(gen));
    raw[key(sym(gen), l)] += w(gen);
  }
  double s = 0.0;
  for (const auto& [k, v] : raw) s += v;
  for (auto& [k, v] : raw) v /= s;
  return NeighbourhoodMeasure(al, raw);
}

}  // namespace

TEST(Alphabet, LettersAndLookup) {
  const auto al = Alphabet::letters(3);
  EXPECT_EQ(al.symbol(2), "c");
  EXPECT_EQ(al.index_of("b"), 1u);
  EXPECT_FALSE(al.index_of("z"));
  EXPECT_THROW(Alphabet({"a", "a"}), DomainError);
  EXPECT_EQ(Alphabet::letters(30).symbol(29), "s29");
}

TEST(Marginal, PointMassAndUniform) {
  const NeighbourhoodMeasure mu(kTwo, {{key(0, {0, 0}), 1.0}});
  const auto nu = marginal_symbol(mu);
  EXPECT_EQ(nu[0], 1.0);
  EXPECT_EQ(nu[1], 0.0);

  const NeighbourhoodMeasure half(kTwo, {{key(0, {1, 0}), 0.5}, {key(1, {0, 3}), 0.5}});
  EXPECT_EQ(marginal_symbol(half)[0], 0.5);
  EXPECT_EQ(marginal_symbol(half)[1], 0.5);
}

TEST(PairProjection, Examples) {
  const NeighbourhoodMeasure iso(kOne, {{key(0, {0}), 1.0}});
  EXPECT_EQ(pair_projection(iso).total_mass(), 0.0);

  const NeighbourhoodMeasure two(kOne, {{key(0, {2}), 1.0}});
  EXPECT_EQ(pair_projection(two)(0, 0), 2.0);

  // Delta2(b, a) sums l(b) over symbol-a vertices: asymmetric in general.
  const NeighbourhoodMeasure asym(kTwo, {{key(0, {0, 1}), 1.0}});
  const auto p = pair_projection(asym);
  EXPECT_EQ(p(1, 0), 1.0);
  EXPECT_EQ(p(0, 1), 0.0);
  EXPECT_FALSE(p.is_symmetric());
}

TEST(Consistency, ThreeCases) {
  const NeighbourhoodMeasure mu(kTwo, {{key(0, {1, 1}), 0.5}, {key(1, {1, 0}), 0.5}});
  const auto d2 = pair_projection(mu);
  EXPECT_EQ(check_consistency(d2, mu), Consistency::Consistent);

  std::vector<double> up(d2.entries().begin(), d2.entries().end());
  for (auto& x : up) x += 0.01;
  EXPECT_EQ(check_consistency(PairMeasure(kTwo, up), mu), Consistency::SubConsistent);

  std::vector<double> down(d2.entries().begin(), d2.entries().end());
  down[0] -= 0.1;
  EXPECT_EQ(check_consistency(PairMeasure(kTwo, down), mu), Consistency::Neither);
  EXPECT_EQ(to_string(Consistency::SubConsistent), "sub-consistent");
}

TEST(TotalVariation, Examples) {
  const NeighbourhoodMeasure a(kOne, {{key(0, {1}), 0.5}, {key(0, {2}), 0.5}});
  const NeighbourhoodMeasure b(kOne, {{key(0, {1}), 1.0}});
  const NeighbourhoodMeasure c(kOne, {{key(0, {5}), 1.0}});
  EXPECT_EQ(total_variation(a, a), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(b, c), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
  EXPECT_THROW(total_variation(a, NeighbourhoodMeasure(kTwo, {{key(0, {0, 0}), 1.0}})), AlphabetMismatch);
}

TEST(TotalVariation, MetricProperties) {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = random_measure(gen, kTwo, 6, 2);
    const auto y = random_measure(gen, kTwo, 6, 2);
    const auto z = random_measure(gen, kTwo, 6, 2);
    EXPECT_EQ(total_variation(x, y), total_variation(y, x));
    EXPECT_LE(total_variation(x, x), 1e-15);
    EXPECT_LE(total_variation(x, z), total_variation(x, y) + total_variation(y, z) + 1e-15);
  }
}

TEST(DegreeProjection, Examples) {
  const NeighbourhoodMeasure iso(kTwo, {{key(1, {0, 0}), 1.0}});
  EXPECT_EQ(degree_projection(iso).support_end(), 1u);
  EXPECT_EQ(degree_projection(iso)[0], 1.0);

  const NeighbourhoodMeasure one(kOne, {{key(0, {0}), 0.2}, {key(0, {3}), 0.8}});
  const auto d = degree_projection(one);
  EXPECT_EQ(d[0], 0.2);
  EXPECT_EQ(d[3], 0.8);

  const NeighbourhoodMeasure two(kTwo, {{key(0, {1, 1}), 0.5}, {key(1, {2, 0}), 0.5}});
  EXPECT_EQ(degree_projection(two)[2], 1.0);
}

TEST(RelativeEntropy, Examples) {
  std::mt19937_64 gen(5);
  const auto mu = random_measure(gen, kTwo, 5, 3);
  EXPECT_EQ(relative_entropy(mu, mu).value(), 0.0);

  const auto q1 = poisson_degree_measure(1.0);
  const auto h = relative_entropy(DegreeMeasure({0.0, 1.0}), q1);
  EXPECT_NEAR(h.value(), 1.0, 1e-15);

  EXPECT_TRUE(relative_entropy(DegreeMeasure({0.5, 0.5}), DegreeMeasure({1.0})).is_infinite());
}

TEST(RelativeEntropy, NonNegative) {
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 300; ++rep) {
    const auto p = random_measure(gen, kTwo, 4, 1);
    const auto q = random_measure(gen, kTwo, 8, 1);
    const auto h = relative_entropy(p, q);
    if (h.is_finite()) EXPECT_GE(h.value(), -1e-12);
  }
}

TEST(Poisson, ZeroIntensityIsPointMass) {
  const SymbolMeasure nu(kTwo, {0.3, 0.7});
  const auto pi = PairMeasure::zero(kTwo);
  EXPECT_EQ(poi_mass(nu, pi, 1, LocalProfile({0, 0})), 0.7);
  EXPECT_EQ(poi_mass(nu, pi, 1, LocalProfile({1, 0})), 0.0);
  EXPECT_EQ(log_poi_mass(nu, pi, 1, LocalProfile({1, 0})), -std::numeric_limits<double>::infinity());
}

TEST(Poisson, SingleColorIsPoisson) {
  const auto [nu, pi] = single_color_targets(2.5);
  for (std::uint32_t k = 0; k < 12; ++k) {
    const double ref = std::exp(-2.5) * std::pow(2.5, k) / std::tgamma(k + 1.0);
    EXPECT_NEAR(poi_mass(nu, pi, 0, LocalProfile({k})), ref, 1e-15);
  }
}

TEST(Poisson, TwoColorProduct) {
  const SymbolMeasure nu(kTwo, {0.5, 0.5});
  const PairMeasure pi(kTwo, {0.25, 0.25, 0.25, 0.25});
  // Symbol a with one b-neighbour and no a-neighbours: intensities 1/2 each.
  const double fa = std::exp(-0.5);
  const double fb = std::exp(-0.5) * 0.5;
  EXPECT_NEAR(poi_mass(nu, pi, 0, LocalProfile({0, 1})), 0.5 * fa * fb, 1e-16);
  EXPECT_THROW(poi_mass(SymbolMeasure(kTwo, {1.0, 0.0}), pi, 1, LocalProfile({0, 0})), DomainError);
}

TEST(Poisson, MassConvergesUpward) {
  const SymbolMeasure nu(kTwo, {0.4, 0.6});
  const PairMeasure pi(kTwo, {2.0, 1.5, 1.5, 1.0});  // intensities up to 5
  for (std::size_t a = 0; a < 2; ++a) {
    double prev = 0.0;
    double total = 0.0;
    for (std::uint32_t deg = 0; deg <= 50; ++deg) {
      for (std::uint32_t i = 0; i <= deg; ++i) total += poi_mass(nu, pi, a, LocalProfile({i, deg - i}));
      EXPECT_GE(total, prev);
      prev = total;
    }
    EXPECT_LT(nu[a] - total, 1e-12);
    EXPECT_LE(total, nu[a] + 1e-15);
  }
}

TEST(Quantize, Examples) {
  const SymbolMeasure nu(kTwo, {0.6, 0.4});
  const auto zero = PairMeasure::zero(kTwo);
  const auto t = quantize(nu, zero, 2);
  EXPECT_EQ(t.bins(0), 1);
  EXPECT_EQ(t.bins(1), 1);
  EXPECT_EQ(t.total_balls(), 0);

  const SymbolMeasure fixed(kTwo, {0.25, 0.75});
  const PairMeasure p(kTwo, {0.5, 0.25, 0.25, 1.0});
  const auto [nq, pq] = quantize_targets(fixed, p, 4);
  EXPECT_EQ(std::vector<double>(nq.weights().begin(), nq.weights().end()),
            std::vector<double>(fixed.weights().begin(), fixed.weights().end()));
  EXPECT_EQ(std::vector<double>(pq.entries().begin(), pq.entries().end()),
            std::vector<double>(p.entries().begin(), p.entries().end()));
}

TEST(Quantize, AlwaysOnLattice) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t m = 1 + rep % 3;
    const auto al = Alphabet::letters(m);
    std::vector<double> w(m);
    double s = 0.0;
    for (auto& x : w) s += (x = u(gen));
    for (auto& x : w) x /= s;
    std::vector<double> e(m * m);
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t a = b; a < m; ++a) e[b * m + a] = e[a * m + b] = 3.0 * u(gen);
    }
    const std::int64_t n = 2 + rep % 40;
    const auto t = quantize(SymbolMeasure(al, w), PairMeasure(al, e), n);
    std::int64_t bins = 0;
    for (auto x : t.bin_counts()) bins += x;
    EXPECT_EQ(bins, n);
    for (std::size_t b = 0; b < m; ++b) {
      EXPECT_EQ(t.balls(b, b) % 2, 0);
      for (std::size_t a = 0; a < m; ++a) EXPECT_EQ(t.balls(b, a), t.balls(a, b));
    }
    // Round trip through the float measures lands on the same lattice point.
    EXPECT_EQ(QuantizedTargets::exact(t.nu(), t.pi(), n), t);
  }
}

TEST(QuantizedTargets, RejectsOffLattice) {
  EXPECT_THROW(QuantizedTargets::from_counts(kOne, 3, {3}, {1}), QuantizationError);
  EXPECT_THROW(QuantizedTargets::from_counts(kOne, 3, {2}, {2}), QuantizationError);
  EXPECT_THROW(QuantizedTargets::exact(SymbolMeasure(kOne, {1.0}), PairMeasure(kOne, {0.3}), 3),
               QuantizationError);
  const auto t = QuantizedTargets::from_counts(kTwo, 4, {1, 3}, {0, 1, 1, 2});
  EXPECT_EQ(t.edges(0, 1), 1);
  EXPECT_EQ(t.edges(1, 1), 1);
}

TEST(ProfileCounts, MeasureRoundTrip) {
  const ProfileCounts c(kOne, 4, {{key(0, {0}), 1}, {key(0, {1}), 2}, {key(0, {3}), 1}});
  EXPECT_EQ(ProfileCounts::from_measure(c.measure(), 4), c);
  EXPECT_EQ(c.symbol_counts(), std::vector<std::int64_t>{4});
  EXPECT_EQ(c.ball_counts(), std::vector<std::int64_t>{5});
  EXPECT_THROW(ProfileCounts::from_measure(c.measure(), 3), QuantizationError);
}
