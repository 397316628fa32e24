#pragma once

// Reference computations used only by the tests. Each one avoids the code
// path it checks: the entropy minimiser never solves for lambda, the G(n, m)
// tail counts graphs instead of sampling them.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace oracle {

struct MinimizationResult {
  double value;            // min H(d || q_c) over the constraint set
  std::vector<double> d;   // minimiser on {0, ..., K}
  int iterations;
};

/// min H(d || q_c) over d on {0..K} with d(0) = x, sum d = 1, sum k d(k) = c,
/// by Newton's method on the equality-constrained primal (infeasible start,
/// backtracking on the KKT residual).
MinimizationResult constrained_entropy_min(double x, double c, int K = 60);

/// Number of graphs on r labelled vertices with m edges and no isolated vertex.
mpz_class graphs_without_isolated(std::int64_t r, std::int64_t m);

/// P(#isolated >= k) in the uniform graph on n vertices with m edges.
mpq_class gnm_isolated_tail(std::int64_t n, std::int64_t m, std::int64_t k);

/// Upper alpha-quantile of chi-square with `dof` degrees of freedom.
double chi_square_critical(double dof, double alpha);

/// Pearson statistic sum (obs - exp)^2 / exp.
double pearson(const std::vector<double>& observed, const std::vector<double>& expected);

}  // namespace oracle
