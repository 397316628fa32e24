#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace ldp {

__extension__ typedef unsigned __int128 uint128;

/// Seeded 64-bit source with derived streams.
///
/// Streams are keyed by (seed, id...) through std::seed_seq, so any
/// (seed, n, chunk) triple names the same sequence no matter which worker
/// consumes it. Bounded draws always consume exactly one engine output.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on {0, ..., bound - 1} via the high half of a 128-bit product.
  /// bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) { return scale(engine_(), bound); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Map a raw 64-bit draw onto {0, ..., bound - 1}.
  static std::uint64_t scale(std::uint64_t raw, std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<uint128>(raw) * bound) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ldp
