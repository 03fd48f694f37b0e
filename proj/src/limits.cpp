#include "cw2/limits.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cw2/log_math.hpp"

namespace cw2 {

namespace {

constexpr int kMaxBruteOrder = 12;

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_exponents(int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("moment exponents must be nonnegative");
}

void check_fractions(double alpha1, double alpha2) {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0))
    throw std::invalid_argument("group fractions must be nonnegative");
  if (alpha1 + alpha2 > 1.0 + 1e-12)
    throw std::invalid_argument("group fractions must satisfy alpha1 + alpha2 <= 1");
}

// K! / ((2k)! (K/2 - k)! 2^{K/2 - k}): ways to choose 2k singletons from K
// factors and pair up the rest.
double even_weight(int big, int k) {
  const int half = big / 2 - k;
  return factorial(big) / (factorial(2 * k) * factorial(half) * std::ldexp(1.0, half));
}

// K! / ((2k+1)! ((K-1)/2 - k)! 2^{(K-1)/2 - k}) for odd K.
double odd_weight(int big, int k) {
  const int half = (big - 1) / 2 - k;
  return factorial(big) / (factorial(2 * k + 1) * factorial(half) * std::ldexp(1.0, half));
}

}  // namespace

double double_factorial(int n) {
  if (n < -1) throw std::invalid_argument("double factorial of " + std::to_string(n));
  double r = 1.0;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

double beta_bar(double beta) {
  if (!(beta >= 0.0) || !(beta < 1.0))
    throw std::domain_error("beta_bar needs beta in [0, 1); no central limit theorem for beta >= 1");
  return beta / (1.0 - beta);
}

double solve_m(double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
  if (beta <= 1.0) return 0.0;

  const auto f = [beta](double x) { return std::tanh(beta * x) - x; };
  // f > 0 just above 0 and f(1) <= 0 for beta > 1.
  double lo = 1e-16, hi = 1.0;
  if (f(hi) == 0.0) return hi;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int step = 0; step < 8; ++step) {
    const double t = std::tanh(beta * x);
    const double fx = t - x;
    if (fx == 0.0) break;
    const double dfx = beta * (1.0 - t * t) - 1.0;
    const double next = x - fx / dfx;
    if (!(next > 0.0) || !(next <= 1.0) || next == x) break;
    x = next;
  }
  return x;
}

GaussianLimit gaussian_cov(double alpha1, double alpha2, double beta) {
  check_fractions(alpha1, alpha2);
  const double bb = beta_bar(beta);
  GaussianLimit g;
  g.alpha1 = alpha1;
  g.alpha2 = alpha2;
  g.beta_bar = bb;
  g.c11 = 1.0 + alpha1 * bb;
  g.c22 = 1.0 + alpha2 * bb;
  g.c12 = std::sqrt(alpha1 * alpha2) * bb;
  return g;
}

double closed_form_moment(int k, int l, double alpha1, double alpha2, double beta) {
  check_exponents(k, l);
  check_fractions(alpha1, alpha2);
  const double bb = beta_bar(beta);
  if ((k + l) % 2 != 0) return 0.0;

  double total = 0.0;
  if (k % 2 == 0) {
    for (int a = 0; a <= k / 2; ++a)
      for (int b = 0; b <= l / 2; ++b)
        total += even_weight(k, a) * even_weight(l, b) * double_factorial(2 * (a + b) - 1) *
                 ipow(bb, a + b) * ipow(alpha1, a) * ipow(alpha2, b);
    return total;
  }
  const double root = std::sqrt(alpha1 * alpha2);
  for (int a = 0; a <= (k - 1) / 2; ++a)
    for (int b = 0; b <= (l - 1) / 2; ++b)
      total += odd_weight(k, a) * odd_weight(l, b) * double_factorial(2 * (a + b) + 1) *
               ipow(bb, a + b + 1) * ipow(alpha1, a) * ipow(alpha2, b) * root;
  return total;
}

double isserlis_moment(int k, int l, double m20, double m11, double m02) {
  check_exponents(k, l);
  if (!(m20 > 0.0) || !(m02 > 0.0) || m20 * m02 - m11 * m11 < -1e-12 * m20 * m02)
    throw std::invalid_argument("second moments do not form a covariance matrix");
  if ((k + l) % 2 != 0) return 0.0;

  // Every recursive reference (a', b') has a' <= a and b' <= b, so a dense
  // (k+1) x (l+1) memo filled in increasing order suffices.
  const int width = l + 1;
  std::vector<double> memo(static_cast<std::size_t>(k + 1) * width, 0.0);
  const auto at = [&](int a, int b) -> double {
    return (a < 0 || b < 0) ? 0.0 : memo[static_cast<std::size_t>(a) * width + b];
  };
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= l; ++b) {
      double v;
      if ((a + b) % 2 != 0) v = 0.0;
      else if (a == 0 && b == 0) v = 1.0;
      else if (b >= 2) v = a * m11 * at(a - 1, b - 1) + (b - 1) * m02 * at(a, b - 2);
      else if (a >= 2) v = (a - 1) * m20 * at(a - 2, b) + b * m11 * at(a - 1, b - 1);
      else v = m11;  // a == b == 1
      memo[static_cast<std::size_t>(a) * width + b] = v;
    }
  }
  return memo.back();
}

double isserlis_brute(int k, int l, double m20, double m11, double m02) {
  check_exponents(k, l);
  const int n = k + l;
  if (n % 2 != 0) return 0.0;
  if (n > kMaxBruteOrder)
    throw std::length_error("pair-partition enumeration limited to K + L <= 12");

  // Factors [0, k) are Z1, [k, n) are Z2.
  const auto pair_value = [&](int i, int j) {
    const bool first_i = i < k, first_j = j < k;
    if (first_i && first_j) return m20;
    if (!first_i && !first_j) return m02;
    return m11;
  };
  std::vector<bool> used(n, false);
  std::function<double()> recurse = [&]() -> double {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) return 1.0;
    used[first] = true;
    double sum = 0.0;
    for (int j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      sum += pair_value(first, j) * recurse();
      used[j] = false;
    }
    used[first] = false;
    return sum;
  };
  return recurse();
}

double critical_moment(int k, int l, double alpha1, double alpha2) {
  check_exponents(k, l);
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0))
    throw std::invalid_argument("group fractions must be nonnegative");
  if ((k + l) % 2 != 0) return 0.0;
  const double order = k + l;
  return std::pow(12.0, order / 4.0) * std::tgamma((order + 1.0) / 4.0) / std::tgamma(0.25) *
         std::pow(alpha1, k / 4.0) * std::pow(alpha2, l / 4.0);
}

double correlation_asymptotic(int order, double beta, int n) {
  if (order < 0) throw std::invalid_argument("correlation order must be nonnegative");
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double bb = beta_bar(beta);
  if (order % 2 != 0) return 0.0;
  return double_factorial(order - 1) * ipow(bb / n, order / 2);
}

LlnLimit lln_limit(double beta) {
  LlnLimit lim;
  lim.m = solve_m(beta);
  if (lim.m == 0.0) {
    lim.atoms = {{0.0, 0.0, 1.0}};
  } else {
    lim.atoms = {{-lim.m, -lim.m, 0.5}, {lim.m, lim.m, 0.5}};
  }
  return lim;
}

}  // namespace cw2
