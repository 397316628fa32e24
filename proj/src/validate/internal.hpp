#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ldp/validate.hpp"

namespace ldp::detail {

/// One model draw at size n, reduced to what the events need.
struct Draw {
  std::int64_t isolated = 0;
  std::optional<DegreeMeasure> degree;
  double coupling_tv = 0.0;
  std::vector<std::int64_t> discrepancies;
  std::int64_t redraws = 0;
};

/// Per-n state shared by every chunk.
struct Setting {
  Model model;
  QuantizedTargets targets;
  std::optional<GraphParams> bernoulli;
};

Setting make_setting(const ExperimentConfig& cfg, std::int64_t n);
Draw draw(const Setting& s, const EventSpec& event, Rng& rng);
bool holds(const EventSpec& event, const Draw& d, std::int64_t n);

/// Runs fn(chunk_index, chunk_size) for every chunk of `samples` and returns
/// the results in chunk order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::int64_t samples, std::int64_t chunk, unsigned workers, Fn fn) {
  const std::int64_t chunks = (samples + chunk - 1) / chunk;
  std::vector<Result> out(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::int64_t j = next++; j < chunks; j = next++) {
      try {
        out[static_cast<std::size_t>(j)] = fn(j, std::min(chunk, samples - j * chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };
  if (workers <= 1 || chunks <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const auto count = std::min<std::int64_t>(workers, chunks);
    for (std::int64_t w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ldp::detail
