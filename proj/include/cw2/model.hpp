#pragma once

// Exact finite-N two-group Curie-Weiss measure.
//
// N spins x_i in {-1, 1} carry the Gibbs weight exp(beta * S^2 / (2N)),
// S = sum of all spins (coupling J = 1). Group 1 is spins [0, n1), group 2
// is spins [n1, n1 + n2), the remaining N - n1 - n2 spins are summed out.
// All probabilities live in log-space.

#include <cstddef>
#include <vector>

namespace cw2 {

struct ModelParams {
  int n_total = 0;
  int n1 = 0;
  int n2 = 0;
  double beta = 0.0;

  int n_rest() const { return n_total - n1 - n2; }

  // Throws std::invalid_argument unless n1, n2 >= 1, n1 + n2 <= n_total,
  // beta finite and >= 0.
  void validate() const;
};

enum class Scaling { PerSpin, SqrtSpin, Critical };

// 1, 1/2 or 3/4: the power of N_i dividing each group sum.
double scaling_exponent(Scaling s);

struct MomentQuery {
  int k_exp = 0;
  int l_exp = 0;
  Scaling scaling = Scaling::SqrtSpin;
};

// Largest (n1 + 1) * (n2 + 1) table exact_pair_distribution will build.
inline constexpr std::size_t kMaxTableEntries = 100'000'000;
// Largest N accepted by the 2^N enumeration.
inline constexpr int kMaxBruteForceSpins = 24;

class PairDistribution {
 public:
  PairDistribution(ModelParams params, std::vector<double> log_prob, double log_z);

  const ModelParams& params() const { return params_; }
  double log_z() const { return log_z_; }

  std::size_t rows() const { return static_cast<std::size_t>(params_.n1) + 1; }
  std::size_t cols() const { return static_cast<std::size_t>(params_.n2) + 1; }

  // Group magnetization for row / column index: s = 2 * index - n.
  int s1_at(std::size_t i) const { return 2 * static_cast<int>(i) - params_.n1; }
  int s2_at(std::size_t j) const { return 2 * static_cast<int>(j) - params_.n2; }
  std::vector<int> support1() const;
  std::vector<int> support2() const;

  double log_prob_at(std::size_t i, std::size_t j) const { return log_prob_[i * cols() + j]; }
  // Lookup by magnetization values; throws std::out_of_range off-support.
  double log_prob(int s1, int s2) const;
  double prob(int s1, int s2) const;

  // Row-major (s1 index, s2 index).
  const std::vector<double>& log_table() const { return log_prob_; }
  std::vector<double> prob_table() const;

 private:
  ModelParams params_;
  std::vector<double> log_prob_;
  double log_z_;
};

// beta * s^2 / (2N), i.e. -beta * H for total magnetization s.
// Throws std::domain_error if |s| > N or s and N differ in parity.
double log_boltzmann_weight(const ModelParams& params, int s_total);

// log Z = log sum_s C(N, (N+s)/2) exp(beta s^2 / (2N)).
double log_partition(const ModelParams& params);

// Joint law of (S1, S2) with the remainder group marginalized through the
// convolution g(t) = sum_{s3} C(N3, up3) exp(beta (t + s3)^2 / (2N)).
// Throws std::length_error if the table would exceed kMaxTableEntries.
PairDistribution exact_pair_distribution(const ModelParams& params);

// Independent oracle: sums the Gibbs weight over all 2^N configurations.
// Throws std::length_error for N > kMaxBruteForceSpins.
PairDistribution brute_force_pair_distribution(const ModelParams& params);

// E[(S1 / n1^g)^K (S2 / n2^g)^L]; exactly 0.0 when K + L is odd.
double mixed_moment_exact(const PairDistribution& dist, const MomentQuery& q);

// All scaled moments for K <= k_max, L <= l_max in one pass over the table.
// Result is indexed [K * (l_max + 1) + L]; odd K + L entries are exactly 0.
std::vector<double> mixed_moment_grid(const PairDistribution& dist, Scaling scaling,
                                      int k_max, int l_max);

}  // namespace cw2
