#include "cw2/model.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "cw2/log_math.hpp"

namespace cw2 {

void ModelParams::validate() const {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("group sizes must be >= 1");
  if (n1 + n2 > n_total)
    throw std::invalid_argument("n1 + n2 = " + std::to_string(n1 + n2) +
                                " exceeds n_total = " + std::to_string(n_total));
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be finite and nonnegative");
}

double scaling_exponent(Scaling s) {
  switch (s) {
    case Scaling::PerSpin: return 1.0;
    case Scaling::SqrtSpin: return 0.5;
    case Scaling::Critical: return 0.75;
  }
  throw std::invalid_argument("unknown scaling");
}

PairDistribution::PairDistribution(ModelParams params, std::vector<double> log_prob,
                                   double log_z)
    : params_(params), log_prob_(std::move(log_prob)), log_z_(log_z) {
  if (log_prob_.size() != rows() * cols())
    throw std::invalid_argument("log_prob table has wrong shape");
}

std::vector<int> PairDistribution::support1() const {
  std::vector<int> s(rows());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = s1_at(i);
  return s;
}

std::vector<int> PairDistribution::support2() const {
  std::vector<int> s(cols());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = s2_at(j);
  return s;
}

double PairDistribution::log_prob(int s1, int s2) const {
  const int n1 = params_.n1, n2 = params_.n2;
  if (std::abs(s1) > n1 || std::abs(s2) > n2 || (s1 + n1) % 2 != 0 || (s2 + n2) % 2 != 0)
    throw std::out_of_range("magnetization pair off the support");
  return log_prob_at(static_cast<std::size_t>((s1 + n1) / 2),
                     static_cast<std::size_t>((s2 + n2) / 2));
}

double PairDistribution::prob(int s1, int s2) const { return std::exp(log_prob(s1, s2)); }

std::vector<double> PairDistribution::prob_table() const {
  std::vector<double> p(log_prob_.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::exp(log_prob_[k]);
  return p;
}

namespace {

double energy_term(double beta, long long s, int n_total) {
  return beta * static_cast<double>(s * s) / (2.0 * n_total);
}

}  // namespace

double log_boltzmann_weight(const ModelParams& params, int s_total) {
  const int n = params.n_total;
  if (n < 1) throw std::domain_error("n_total must be positive");
  if (std::abs(s_total) > n) throw std::domain_error("|s_total| exceeds n_total");
  if ((s_total + n) % 2 != 0) throw std::domain_error("s_total and n_total differ in parity");
  return energy_term(params.beta, s_total, n);
}

double log_partition(const ModelParams& params) {
  const int n = params.n_total;
  if (n < 1) throw std::domain_error("n_total must be positive");
  const auto lb = log_binomial_row(n);
  std::vector<double> terms(lb.size());
  for (int up = 0; up <= n; ++up) terms[up] = lb[up] + energy_term(params.beta, 2 * up - n, n);
  return log_sum_exp(terms);
}

PairDistribution exact_pair_distribution(const ModelParams& params) {
  params.validate();
  const int n = params.n_total, n1 = params.n1, n2 = params.n2, n3 = params.n_rest();
  const std::size_t rows = static_cast<std::size_t>(n1) + 1;
  const std::size_t cols = static_cast<std::size_t>(n2) + 1;
  if (rows > kMaxTableEntries / cols)
    throw std::length_error("pair table of " + std::to_string(rows) + " x " +
                            std::to_string(cols) + " exceeds the entry budget");

  const auto lb1 = log_binomial_row(n1);
  const auto lb2 = log_binomial_row(n2);
  const auto lb3 = log_binomial_row(n3);

  // g indexed by u = up1 + up2, t = 2u - n12. g(-t) == g(t), so only the
  // lower half is summed and the rest mirrored.
  const int n12 = n1 + n2;
  std::vector<double> g(static_cast<std::size_t>(n12) + 1);
  std::vector<double> terms(static_cast<std::size_t>(n3) + 1);
  for (int u = 0; 2 * u <= n12; ++u) {
    const long long t = 2LL * u - n12;
    double v;
    if (n3 == 0) {
      v = energy_term(params.beta, t, n);
    } else {
      for (int k = 0; k <= n3; ++k) terms[k] = lb3[k] + energy_term(params.beta, t + 2LL * k - n3, n);
      v = log_sum_exp(terms);
    }
    g[u] = v;
    g[n12 - u] = v;
  }

  std::vector<double> table(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) table[i * cols + j] = (lb1[i] + lb2[j]) + g[i + j];

  const double log_z = log_sum_exp(table);
  for (double& v : table) v -= log_z;
  return PairDistribution(params, std::move(table), log_z);
}

PairDistribution brute_force_pair_distribution(const ModelParams& params) {
  params.validate();
  const int n = params.n_total, n1 = params.n1, n2 = params.n2;
  if (n > kMaxBruteForceSpins)
    throw std::length_error("brute force enumeration limited to N <= " +
                            std::to_string(kMaxBruteForceSpins));

  const std::size_t cols = static_cast<std::size_t>(n2) + 1;
  std::vector<double> mass((static_cast<std::size_t>(n1) + 1) * cols, 0.0);
  const std::uint32_t mask1 = (1u << n1) - 1u;
  const std::uint32_t mask2 = ((1u << n2) - 1u) << n1;
  // Weights are taken relative to the all-up configuration to stay in range.
  const double top = energy_term(params.beta, n, n);
  double total = 0.0;
  for (std::uint32_t cfg = 0; cfg < (1u << n); ++cfg) {
    const int up = std::popcount(cfg);
    const int up1 = std::popcount(cfg & mask1);
    const int up2 = std::popcount(cfg & mask2);
    const double w = std::exp(energy_term(params.beta, 2 * up - n, n) - top);
    mass[static_cast<std::size_t>(up1) * cols + static_cast<std::size_t>(up2)] += w;
    total += w;
  }
  std::vector<double> log_prob(mass.size());
  for (std::size_t k = 0; k < mass.size(); ++k) log_prob[k] = std::log(mass[k] / total);
  return PairDistribution(params, std::move(log_prob), std::log(total) + top);
}

std::vector<double> mixed_moment_grid(const PairDistribution& dist, Scaling scaling, int k_max,
                                      int l_max) {
  if (k_max < 0 || l_max < 0) throw std::invalid_argument("exponent caps must be nonnegative");
  const auto& p = dist.params();
  const double g = scaling_exponent(scaling);
  const double d1 = std::pow(static_cast<double>(p.n1), g);
  const double d2 = std::pow(static_cast<double>(p.n2), g);
  const std::size_t rows = dist.rows(), cols = dist.cols();
  const auto width = static_cast<std::size_t>(l_max) + 1;

  // Column powers x2_j^L, laid out [j * width + L].
  std::vector<double> col_pow(cols * width);
  for (std::size_t j = 0; j < cols; ++j) {
    const double x = dist.s2_at(j) / d2;
    double acc = 1.0;
    for (std::size_t l = 0; l < width; ++l, acc *= x) col_pow[j * width + l] = acc;
  }

  std::vector<double> out((static_cast<std::size_t>(k_max) + 1) * width, 0.0);
  std::vector<double> inner(width);
  for (std::size_t i = 0; i < rows; ++i) {
    std::fill(inner.begin(), inner.end(), 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      const double pij = std::exp(dist.log_prob_at(i, j));
      const double* cp = &col_pow[j * width];
      for (std::size_t l = 0; l < width; ++l) inner[l] += pij * cp[l];
    }
    const double x = dist.s1_at(i) / d1;
    double acc = 1.0;
    for (int k = 0; k <= k_max; ++k, acc *= x)
      for (std::size_t l = 0; l < width; ++l) out[k * width + l] += acc * inner[l];
  }
  for (int k = 0; k <= k_max; ++k)
    for (int l = 0; l <= l_max; ++l)
      if ((k + l) % 2 != 0) out[k * width + l] = 0.0;
  return out;
}

double mixed_moment_exact(const PairDistribution& dist, const MomentQuery& q) {
  if (q.k_exp < 0 || q.l_exp < 0) throw std::invalid_argument("negative moment exponent");
  if ((q.k_exp + q.l_exp) % 2 != 0) return 0.0;
  const auto& p = dist.params();
  const double g = scaling_exponent(q.scaling);
  const double d1 = std::pow(static_cast<double>(p.n1), g);
  const double d2 = std::pow(static_cast<double>(p.n2), g);
  std::vector<double> col(dist.cols());
  for (std::size_t j = 0; j < col.size(); ++j) col[j] = ipow(dist.s2_at(j) / d2, q.l_exp);

  double total = 0.0;
  for (std::size_t i = 0; i < dist.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < col.size(); ++j) row += std::exp(dist.log_prob_at(i, j)) * col[j];
    total += ipow(dist.s1_at(i) / d1, q.k_exp) * row;
  }
  return total;
}

}  // namespace cw2
