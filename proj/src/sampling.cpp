#include "cw2/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cw2 {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  u128 m = static_cast<u128>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t floor = -n % n;
    while (low < floor) {
      m = static_cast<u128>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
  if (n > 0xffffffffu) throw std::length_error("alias table too large");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("invalid alias weight");
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("alias weights sum to zero");

  threshold_.resize(n);
  alias_.resize(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    threshold_[i] = weights[i] * static_cast<double>(n) / sum;
    alias_[i] = static_cast<std::uint32_t>(i);
    (threshold_[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    alias_[s] = l;
    threshold_[l] -= 1.0 - threshold_[s];
    if (threshold_[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t i : small) threshold_[i] = 1.0;
  for (std::uint32_t i : large) threshold_[i] = 1.0;
}

std::size_t AliasTable::sample(Rng& rng) const {
  const auto i = static_cast<std::size_t>(rng.below(threshold_.size()));
  return rng.uniform01() < threshold_[i] ? i : alias_[i];
}

SampleBatch sample_exact(const PairDistribution& dist, std::size_t n_draws, std::uint64_t seed,
                         unsigned workers) {
  if (n_draws == 0) throw std::invalid_argument("n_draws must be >= 1");
  const auto probs = dist.prob_table();
  const AliasTable table(probs);
  const std::size_t cols = dist.cols();

  SampleBatch batch;
  batch.params = dist.params();
  batch.seed = seed;
  batch.draws.resize(n_draws);

  const std::size_t shards = (n_draws + kShardSize - 1) / kShardSize;
  const auto run_shard = [&](std::size_t shard) {
    Rng rng(seed ^ static_cast<std::uint64_t>(shard));
    const std::size_t begin = shard * kShardSize;
    const std::size_t end = std::min(n_draws, begin + kShardSize);
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t cell = table.sample(rng);
      batch.draws[k] = {dist.s1_at(cell / cols), dist.s2_at(cell % cols)};
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, shards));
  if (workers <= 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
    return batch;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < shards; s += workers) run_shard(s);
    });
  for (auto& t : pool) t.join();
  return batch;
}

void ChainConfig::validate() const {
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (burn_in < 0 || burn_in >= sweeps)
    throw std::invalid_argument("burn_in must satisfy 0 <= burn_in < sweeps");
}

SampleBatch glauber_chain(const ModelParams& params, const ChainConfig& cfg) {
  params.validate();
  cfg.validate();
  const int n = params.n_total;
  const int end1 = params.n1, end2 = params.n1 + params.n2;
  Rng rng(cfg.seed);

  // Stored spins; the physical spin is orientation * stored[i].
  std::vector<signed char> stored(static_cast<std::size_t>(n));
  int total = 0, sum1 = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const int x = (rng.next() >> 63) ? 1 : -1;
    stored[i] = static_cast<signed char>(x);
    total += x;
    if (i < end1) sum1 += x;
    else if (i < end2) sum2 += x;
  }
  int orientation = 1;

  // Flipping x at total S changes the log weight by (2 beta / N)(1 - x S);
  // tabulate the acceptance probability by x S in [-N, N].
  std::vector<double> accept(2 * static_cast<std::size_t>(n) + 1);
  for (int xs = -n; xs <= n; ++xs)
    accept[xs + n] = std::min(1.0, std::exp(2.0 * params.beta / n * (1.0 - xs)));

  SampleBatch batch;
  batch.params = params;
  batch.seed = cfg.seed;
  batch.draws.reserve(static_cast<std::size_t>((cfg.sweeps - cfg.burn_in) / cfg.thin));
  long long accepted = 0, proposed = 0;

  for (long long sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    // N or N + 1 proposals, by a fair coin.
    const int steps = n + static_cast<int>(rng.next() >> 63);
    for (int step = 0; step < steps; ++step) {
      const auto site = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
      const int x = orientation * stored[site];
      const double a = accept[x * total + n];
      ++proposed;
      if (a >= 1.0 || rng.uniform01() < a) {
        ++accepted;
        stored[site] = static_cast<signed char>(-stored[site]);
        total -= 2 * x;
        const int i = static_cast<int>(site);
        if (i < end1) sum1 -= 2 * x;
        else if (i < end2) sum2 -= 2 * x;
      }
    }
    if (cfg.global_flip && (rng.next() >> 63)) {
      orientation = -orientation;
      total = -total;
      sum1 = -sum1;
      sum2 = -sum2;
    }
    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0)
      batch.draws.push_back({sum1, sum2});
  }
  batch.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
  return batch;
}

MomentEstimate empirical_moments(const SampleBatch& batch, const MomentQuery& q) {
  if (batch.draws.empty()) throw std::invalid_argument("empty sample batch");
  if (q.k_exp < 0 || q.l_exp < 0) throw std::invalid_argument("negative moment exponent");
  const double g = scaling_exponent(q.scaling);
  const double d1 = std::pow(static_cast<double>(batch.params.n1), g);
  const double d2 = std::pow(static_cast<double>(batch.params.n2), g);
  const auto value = [&](const Draw& d) {
    double v = 1.0;
    for (int k = 0; k < q.k_exp; ++k) v *= d.s1 / d1;
    for (int l = 0; l < q.l_exp; ++l) v *= d.s2 / d2;
    return v;
  };

  const double count = static_cast<double>(batch.draws.size());
  double mean = 0.0;
  for (const auto& d : batch.draws) mean += value(d);
  mean /= count;
  if (batch.draws.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& d : batch.draws) {
    const double dev = value(d) - mean;
    ss += dev * dev;
  }
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace cw2
