#include "ldp/rng.hpp"

#include <vector>

namespace ldp {

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (stream.size() + 1) + 1);
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  // Length tag keeps Rng(s) and Rng(s, {0}) apart.
  words.push_back(static_cast<std::uint32_t>(stream.size()));
  for (auto id : stream) push(id);
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

}  // namespace ldp
