#include <atomic>
#include <cstdlib>
#include <string>

#include "ldp/errors.hpp"
#include "ldp/kernels.hpp"

namespace ldp::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(LDP_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__)) && \
    (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("LDP_KERNELS"); env && std::string(env) == "scalar") {
    return Backend::Scalar;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  return b == Backend::Scalar || cpu_has_avx2();
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw DomainError("kernel backend '" + std::string(backend_name(b)) + "' is not available");
  }
  current().store(b, std::memory_order_relaxed);
}

void reset_backend() { current().store(detect(), std::memory_order_relaxed); }

double l1_distance(std::span<const double> a, std::span<const double> b) {
  return active_backend() == Backend::Avx2 ? avx2::l1_distance(a, b) : scalar::l1_distance(a, b);
}

KlSum kl_divergence(std::span<const double> p, std::span<const double> q) {
  return active_backend() == Backend::Avx2 ? avx2::kl_divergence(p, q)
                                           : scalar::kl_divergence(p, q);
}

KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q) {
  return active_backend() == Backend::Avx2 ? avx2::kl_divergence_log(p, log_q)
                                           : scalar::kl_divergence_log(p, log_q);
}

}  // namespace ldp::kernels
