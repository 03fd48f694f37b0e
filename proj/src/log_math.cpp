#include "cw2/log_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cw2 {

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

std::vector<double> log_binomial_row(int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  const double top = std::lgamma(n + 1.0);
  for (int k = 0; 2 * k <= n; ++k) {
    const double v = top - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    row[k] = v;
    row[n - k] = v;
  }
  row[0] = row[n] = 0.0;
  return row;
}

}  // namespace cw2
