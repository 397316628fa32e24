#pragma once

// Dense reductions used by the entropy and distance routines.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant compiled in its own translation unit. The variant is
// picked once at runtime from cpuid; LDP_KERNELS=scalar in the environment
// forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace ldp::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b);

/// True if the backend was compiled in and the CPU supports it.
bool backend_available(Backend b);

/// Backend used by the dispatching entry points below.
Backend active_backend();

/// Override the dispatch choice (tests and benchmarks). Throws DomainError
/// if the backend is unavailable.
void force_backend(Backend b);

/// Restore cpuid-based selection.
void reset_backend();

/// Result of sum_i p_i log(p_i / q_i). `infinite` is set when some p_i > 0
/// meets q_i <= 0 (or log q_i = -inf); `value` then holds the finite part.
struct KlSum {
  double value = 0.0;
  bool infinite = false;
};

/// sum_i |a_i - b_i|. Spans must have equal length.
double l1_distance(std::span<const double> a, std::span<const double> b);

/// sum_{p_i > 0} p_i (log p_i - log q_i), with 0 log 0 = 0.
KlSum kl_divergence(std::span<const double> p, std::span<const double> q);

/// Same sum with the reference measure given in log space.
KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q);

namespace scalar {
double l1_distance(std::span<const double> a, std::span<const double> b);
KlSum kl_divergence(std::span<const double> p, std::span<const double> q);
KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q);
}  // namespace scalar

namespace avx2 {
double l1_distance(std::span<const double> a, std::span<const double> b);
KlSum kl_divergence(std::span<const double> p, std::span<const double> q);
KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q);
/// Four-lane natural log, exposed for accuracy tests. x > 0 and finite.
void log4(const double* x, double* out);
}  // namespace avx2

}  // namespace ldp::kernels
