#pragma once

#include <span>
#include <vector>

namespace cw2 {

// log(sum_i exp(xs[i])), accumulated in index order. Empty input gives -inf.
double log_sum_exp(std::span<const double> xs);

// log C(n, k) for k = 0..n via lgamma. The row is mirrored so that
// entry k and entry n-k are bit-identical.
std::vector<double> log_binomial_row(int n);

// x^k by repeated multiplication; ipow(0.0, 0) == 1.
inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace cw2
