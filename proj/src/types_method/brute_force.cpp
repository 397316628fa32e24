#include <algorithm>

#include "ldp/types_method.hpp"

namespace ldp {

// Deliberately shares nothing with the counting formula: walk every
// assignment of labelled balls to bins with an odometer, tally the
// resulting occupancy types, divide by the number of assignments.
std::map<ProfileCounts, mpq_class> brute_force_type_distribution(const QuantizedTargets& t,
                                                                 std::uint64_t max_allocations) {
  const std::size_t m = t.colors();
  const mpz_class total = allocation_count(t);
  if (total > mpz_class(static_cast<unsigned long>(max_allocations))) {
    throw BudgetError("brute force needs " + total.get_str() +
                      " allocations, above the budget of " + std::to_string(max_allocations));
  }

  // Bins of symbol a occupy [first[a], first[a] + N_a).
  std::vector<std::size_t> first(m + 1, 0);
  for (std::size_t a = 0; a < m; ++a) first[a + 1] = first[a] + static_cast<std::size_t>(t.bins(a));
  std::vector<std::uint32_t> bin_symbol(static_cast<std::size_t>(t.n()));
  for (std::size_t a = 0; a < m; ++a) {
    std::fill(bin_symbol.begin() + static_cast<std::ptrdiff_t>(first[a]),
              bin_symbol.begin() + static_cast<std::ptrdiff_t>(first[a + 1]),
              static_cast<std::uint32_t>(a));
  }

  struct Ball {
    std::size_t color;  // b
    std::size_t lo;     // first bin of the target class
    std::size_t count;  // N_a
  };
  std::vector<Ball> balls;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::int64_t i = 0; i < t.balls(b, a); ++i) {
        if (t.bins(a) == 0) {
          throw FeasibilityError("balls addressed to symbol " + t.alphabet().symbol(a) +
                                 ", which has no bins");
        }
        balls.push_back(Ball{b, first[a], static_cast<std::size_t>(t.bins(a))});
      }
    }
  }

  // occupancy[bin * m + b]; start with every ball in the first bin of its class.
  std::vector<std::uint32_t> occupancy(static_cast<std::size_t>(t.n()) * m, 0);
  std::vector<std::size_t> digit(balls.size(), 0);
  for (const auto& ball : balls) ++occupancy[ball.lo * m + ball.color];

  // Canonical key: per bin (grouped by symbol) its occupancy row, rows sorted
  // within each symbol block.
  using Key = std::vector<std::uint32_t>;
  std::map<Key, std::uint64_t> tally;
  Key key(occupancy.size());
  std::vector<std::size_t> order(static_cast<std::size_t>(t.n()));
  auto record = [&] {
    for (std::size_t v = 0; v < order.size(); ++v) order[v] = v;
    for (std::size_t a = 0; a < m; ++a) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(first[a]),
                order.begin() + static_cast<std::ptrdiff_t>(first[a + 1]),
                [&](std::size_t x, std::size_t y) {
                  return std::lexicographical_compare(
                      occupancy.begin() + static_cast<std::ptrdiff_t>(x * m),
                      occupancy.begin() + static_cast<std::ptrdiff_t>((x + 1) * m),
                      occupancy.begin() + static_cast<std::ptrdiff_t>(y * m),
                      occupancy.begin() + static_cast<std::ptrdiff_t>((y + 1) * m));
                });
    }
    for (std::size_t v = 0; v < order.size(); ++v) {
      std::copy_n(occupancy.begin() + static_cast<std::ptrdiff_t>(order[v] * m), m,
                  key.begin() + static_cast<std::ptrdiff_t>(v * m));
    }
    auto it = tally.find(key);
    if (it == tally.end()) {
      tally.emplace(key, 1);
    } else {
      ++it->second;
    }
  };

  while (true) {
    record();
    std::size_t j = 0;
    for (; j < balls.size(); ++j) {
      const auto& ball = balls[j];
      --occupancy[(ball.lo + digit[j]) * m + ball.color];
      digit[j] = digit[j] + 1 == ball.count ? 0 : digit[j] + 1;
      ++occupancy[(ball.lo + digit[j]) * m + ball.color];
      if (digit[j] != 0) break;
    }
    if (j == balls.size()) break;
  }

  std::map<ProfileCounts, mpq_class> out;
  for (const auto& [k, hits] : tally) {
    std::map<ProfileKey, std::int64_t> counts;
    for (std::size_t v = 0; v < bin_symbol.size(); ++v) {
      LocalProfile l(std::vector<std::uint32_t>(k.begin() + static_cast<std::ptrdiff_t>(v * m),
                                                k.begin() + static_cast<std::ptrdiff_t>((v + 1) * m)));
      ++counts[ProfileKey{bin_symbol[v], std::move(l)}];
    }
    mpq_class p(mpz_class(static_cast<unsigned long>(hits)), total);
    p.canonicalize();
    out.emplace(ProfileCounts(t.alphabet(), t.n(), std::move(counts)), std::move(p));
  }
  return out;
}

}  // namespace ldp
