// Compiled with -mavx2 -mfma. Only reached after a cpuid check.

#include <cmath>
#include <cstdint>

#include "ldp/errors.hpp"
#include "ldp/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace ldp::kernels::avx2 {
namespace {

// fdlibm e_log.c coefficients; |error| < 1 ulp on the reduced range.
constexpr double kLg1 = 6.666666666666735130e-01;
constexpr double kLg2 = 3.999999999940941908e-01;
constexpr double kLg3 = 2.857142874366239149e-01;
constexpr double kLg4 = 2.222219843214978396e-01;
constexpr double kLg5 = 1.818357216161805012e-01;
constexpr double kLg6 = 1.531383769920937332e-01;
constexpr double kLg7 = 1.479819860511658591e-01;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Natural log of four positive finite doubles (subnormals included).
inline __m256d vlog(__m256d x) {
  const __m256d tiny = _mm256_set1_pd(2.2250738585072014e-308);
  const __m256d two54 = _mm256_set1_pd(18014398509481984.0);
  __m256d sub = _mm256_cmp_pd(x, tiny, _CMP_LT_OQ);
  x = _mm256_blendv_pd(x, _mm256_mul_pd(x, two54), sub);
  __m256d k_adjust = _mm256_and_pd(sub, _mm256_set1_pd(-54.0));

  __m256i bits = _mm256_castpd_si256(x);
  // Biased exponent as a double via the 2^52 magic-number trick.
  __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256i magic_i = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic_i)),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));
  __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);  // [1, 2)

  __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));
  e = _mm256_add_pd(e, k_adjust);

  __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  __m256d z = _mm256_mul_pd(s, s);
  __m256d w = _mm256_mul_pd(z, z);
  __m256d t1 = _mm256_fmadd_pd(w, _mm256_set1_pd(kLg6), _mm256_set1_pd(kLg4));
  t1 = _mm256_fmadd_pd(w, t1, _mm256_set1_pd(kLg2));
  t1 = _mm256_mul_pd(w, t1);
  __m256d t2 = _mm256_fmadd_pd(w, _mm256_set1_pd(kLg7), _mm256_set1_pd(kLg5));
  t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(kLg3));
  t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(kLg1));
  t2 = _mm256_mul_pd(z, t2);
  __m256d r = _mm256_add_pd(t1, t2);
  __m256d hfsq = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_mul_pd(f, f));
  // e*ln2_hi - ((hfsq - (s*(hfsq+R) + e*ln2_lo)) - f)
  __m256d inner = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, r),
                                  _mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo)));
  __m256d res = _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f);
  return _mm256_sub_pd(_mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)), res);
}

}  // namespace

void log4(const double* x, double* out) {
  _mm256_storeu_pd(out, vlog(_mm256_loadu_pd(x)));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("l1_distance: length mismatch");
  const std::size_t n = a.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i + 4),
                               _mm256_loadu_pd(b.data() + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(sign, d1));
  }
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign, d));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

namespace {

// Shared body of both KL kernels. `log_space` selects whether `q` already
// holds log q.
template <bool log_space>
KlSum kl_impl(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = p.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_inf = _mm256_set1_pd(-HUGE_VAL);
  __m256d acc = _mm256_setzero_pd();
  int inf_mask = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d pv = _mm256_loadu_pd(p.data() + i);
    __m256d qv = _mm256_loadu_pd(q.data() + i);
    __m256d pos = _mm256_cmp_pd(pv, zero, _CMP_GT_OQ);
    if (_mm256_movemask_pd(pos) == 0) continue;
    __m256d q_ok;
    __m256d log_q;
    if constexpr (log_space) {
      q_ok = _mm256_cmp_pd(qv, neg_inf, _CMP_GT_OQ);
      log_q = _mm256_blendv_pd(zero, qv, q_ok);
    } else {
      q_ok = _mm256_cmp_pd(qv, zero, _CMP_GT_OQ);
      log_q = vlog(_mm256_blendv_pd(one, qv, q_ok));
    }
    inf_mask |= _mm256_movemask_pd(_mm256_andnot_pd(q_ok, pos));
    __m256d live = _mm256_and_pd(pos, q_ok);
    __m256d log_p = vlog(_mm256_blendv_pd(one, pv, pos));
    __m256d term = _mm256_mul_pd(pv, _mm256_sub_pd(log_p, log_q));
    acc = _mm256_add_pd(acc, _mm256_and_pd(live, term));
  }
  KlSum out;
  out.value = hsum(acc);
  out.infinite = inf_mask != 0;
  for (; i < n; ++i) {
    if (!(p[i] > 0.0)) continue;
    if constexpr (log_space) {
      if (!(q[i] > -HUGE_VAL)) {
        out.infinite = true;
        continue;
      }
      out.value += p[i] * (std::log(p[i]) - q[i]);
    } else {
      if (!(q[i] > 0.0)) {
        out.infinite = true;
        continue;
      }
      out.value += p[i] * (std::log(p[i]) - std::log(q[i]));
    }
  }
  return out;
}

}  // namespace

KlSum kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("kl_divergence: length mismatch");
  return kl_impl<false>(p, q);
}

KlSum kl_divergence_log(std::span<const double> p, std::span<const double> log_q) {
  if (p.size() != log_q.size()) throw DomainError("kl_divergence_log: length mismatch");
  return kl_impl<true>(p, log_q);
}

}  // namespace ldp::kernels::avx2

#else

// Built without AVX2 support: the dispatcher never selects these.
namespace ldp::kernels::avx2 {
void log4(const double*, double*) { throw DomainError("AVX2 kernels not compiled"); }
double l1_distance(std::span<const double>, std::span<const double>) {
  throw DomainError("AVX2 kernels not compiled");
}
KlSum kl_divergence(std::span<const double>, std::span<const double>) {
  throw DomainError("AVX2 kernels not compiled");
}
KlSum kl_divergence_log(std::span<const double>, std::span<const double>) {
  throw DomainError("AVX2 kernels not compiled");
}
}  // namespace ldp::kernels::avx2

#endif
