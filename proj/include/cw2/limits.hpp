#pragma once

// Closed-form limiting objects of the two-group Curie-Weiss model.

#include <vector>

namespace cw2 {

struct GaussianLimit {
  double c11 = 1.0;
  double c12 = 0.0;
  double c22 = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta_bar = 0.0;

  double determinant() const { return c11 * c22 - c12 * c12; }
};

struct Atom {
  double x = 0.0;
  double y = 0.0;
  double mass = 0.0;
};

struct LlnLimit {
  double m = 0.0;
  std::vector<Atom> atoms;
};

// (n - 1)!! with (-1)!! = 1 and 0!! = 1.
double double_factorial(int n);

// beta / (1 - beta). Throws std::domain_error for beta outside [0, 1).
double beta_bar(double beta);

// Spontaneous magnetization: 0 for beta <= 1, otherwise the positive root of
// tanh(beta x) = x. Throws std::domain_error for negative beta.
double solve_m(double beta);

// Covariance of the Gaussian limit of (S1/sqrt(N1), S2/sqrt(N2)).
GaussianLimit gaussian_cov(double alpha1, double alpha2, double beta);

// Limit of E[(S1/sqrt(N1))^K (S2/sqrt(N2))^L] from the double series in
// alpha1, alpha2, beta_bar (even-even and odd-odd forms). Zero for K + L odd.
double closed_form_moment(int k, int l, double alpha1, double alpha2, double beta);

// E[Z1^K Z2^L] for a centered bivariate normal with second moments
// m20, m11, m02, via the two-term recursion in each index.
double isserlis_moment(int k, int l, double m20, double m11, double m02);

// Same moment as a sum over all pair partitions of the K + L factors.
// Throws std::length_error for K + L > 12.
double isserlis_brute(int k, int l, double m20, double m11, double m02);

// Limit of E[(S1/N1^{3/4})^K (S2/N2^{3/4})^L] at beta = 1.
double critical_moment(int k, int l, double alpha1, double alpha2);

// Leading order of E[X_1 ... X_order] for distinct spins at beta < 1:
// (order-1)!! beta_bar^{order/2} n^{-order/2}; zero for odd order.
double correlation_asymptotic(int order, double beta, int n);

LlnLimit lln_limit(double beta);

}  // namespace cw2
