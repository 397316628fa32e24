#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {
namespace {

mpz_class binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace

MinimizationResult constrained_entropy_min(double x, double c, int K) {
  // Variables y_k = d(k), k = 1..K; d(0) = x is fixed.
  const std::size_t n = static_cast<std::size_t>(K);
  std::vector<double> log_q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    log_q[i] = -c + k * std::log(c) - std::lgamma(k + 1.0);
  }
  const double b0 = 1.0 - x;
  const double b1 = c;

  std::vector<double> y(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (y[i] = std::exp(log_q[i]));
  for (auto& v : y) v *= b0 / s;

  auto objective_grad = [&](const std::vector<double>& v, std::vector<double>& g) {
    for (std::size_t i = 0; i < n; ++i) g[i] = std::log(v[i]) - log_q[i] + 1.0;
  };
  auto residual = [&](const std::vector<double>& v, const std::vector<double>& g, double w0, double w1) {
    double r = 0.0;
    double p0 = -b0;
    double p1 = -b1;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 1);
      const double dual = g[i] + w0 + w1 * k;
      r += dual * dual;
      p0 += v[i];
      p1 += k * v[i];
    }
    return std::sqrt(r + p0 * p0 + p1 * p1);
  };

  std::vector<double> g(n), step(n), trial(n), gt(n);
  double w0 = 0.0;
  double w1 = 0.0;
  int it = 0;
  for (; it < 200; ++it) {
    objective_grad(y, g);
    // KKT: H dy + A^T w = -g, A dy = b - A y, with H = diag(1/y).
    double r0 = b0;
    double r1 = b1;
    double s00 = 0.0, s01 = 0.0, s11 = 0.0, h0 = 0.0, h1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 1);
      r0 -= y[i];
      r1 -= k * y[i];
      s00 += y[i];
      s01 += k * y[i];
      s11 += k * k * y[i];
      h0 += y[i] * g[i];
      h1 += k * y[i] * g[i];
    }
    // (A H^-1 A^T) w = -A H^-1 g - r
    const double rhs0 = -h0 - r0;
    const double rhs1 = -h1 - r1;
    const double det = s00 * s11 - s01 * s01;
    const double nw0 = (rhs0 * s11 - rhs1 * s01) / det;
    const double nw1 = (s00 * rhs1 - s01 * rhs0) / det;
    double step_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 1);
      step[i] = y[i] * (-g[i] - nw0 - nw1 * k);
      step_norm = std::max(step_norm, std::fabs(step[i]) / std::max(y[i], 1e-300));
    }
    const double before = residual(y, g, nw0, nw1);
    double t = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (step[i] < 0.0) t = std::min(t, -0.99 * y[i] / step[i]);
    }
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = y[i] + t * step[i];
      objective_grad(trial, gt);
      if (residual(trial, gt, nw0, nw1) <= (1.0 - 0.01 * t) * before) break;
      t *= 0.5;
    }
    y = trial;
    w0 = nw0;
    w1 = nw1;
    if (step_norm * t < 1e-14) break;
  }

  MinimizationResult out{0.0, std::vector<double>(n + 1), it};
  out.d[0] = x;
  out.value = x > 0.0 ? x * (std::log(x) + c) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.d[i + 1] = y[i];
    out.value += y[i] * (std::log(y[i]) - log_q[i]);
  }
  return out;
}

mpz_class graphs_without_isolated(std::int64_t r, std::int64_t m) {
  mpz_class total = 0;
  for (std::int64_t j = 0; j <= r; ++j) {
    const std::int64_t slots = (r - j) * (r - j - 1) / 2;
    mpz_class term = binom(r, j) * binom(slots, m);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

mpq_class gnm_isolated_tail(std::int64_t n, std::int64_t m, std::int64_t k) {
  mpz_class hits = 0;
  for (std::int64_t i = std::max<std::int64_t>(k, 0); i <= n; ++i) {
    hits += binom(n, i) * graphs_without_isolated(n - i, m);
  }
  mpq_class p(hits, binom(n * (n - 1) / 2, m));
  p.canonicalize();
  return p;
}

double chi_square_critical(double dof, double alpha) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), alpha));
}

double pearson(const std::vector<double>& observed, const std::vector<double>& expected) {
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

}  // namespace oracle
