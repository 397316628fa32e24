#include <cmath>

#include "ldp/errors.hpp"
#include "ldp/kernels.hpp"

namespace ldp::kernels::scalar {

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("l1_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

KlSum kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("kl_divergence: length mismatch");
  KlSum out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    if (!(q[i] > 0.0)) {
      out.infinite = true;
      continue;
    }
    out.value += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return out;
}

KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q) {
  if (p.size() != log_q.size()) throw DomainError("kl_divergence_log: length mismatch");
  KlSum out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    if (!(log_q[i] > -HUGE_VAL)) {
      out.infinite = true;
      continue;
    }
    out.value += p[i] * (std::log(p[i]) - log_q[i]);
  }
  return out;
}

}  // namespace ldp::kernels::scalar
