#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cw2/model.hpp"

namespace cw2 {

// std::mt19937_64 with library-independent conversions to uniform doubles
// and bounded integers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on [0, n), n >= 1 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Vose alias table over a finite discrete law.
class AliasTable {
 public:
  // weights need not be normalized; all must be >= 0 with a positive sum.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return threshold_.size(); }
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

struct Draw {
  int s1 = 0;
  int s2 = 0;
  friend bool operator==(const Draw&, const Draw&) = default;
};

struct SampleBatch {
  std::vector<Draw> draws;
  ModelParams params;
  std::uint64_t seed = 0;
  // Set by glauber_chain: fraction of accepted single-spin proposals.
  std::optional<double> acceptance_rate;
};

struct ChainConfig {
  long long sweeps = 11000;  // total, including burn-in
  long long burn_in = 1000;
  long long thin = 1;
  std::uint64_t seed = 0;
  // After each sweep, flip every spin with probability 1/2.
  bool global_flip = true;

  // Throws std::invalid_argument unless sweeps, thin >= 1 and
  // 0 <= burn_in < sweeps.
  void validate() const;
};

struct MomentEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

inline constexpr std::size_t kShardSize = 1 << 16;

// I.i.d. draws of (S1, S2) from dist. Draws come in fixed shards of
// kShardSize, shard s seeded with seed ^ s, so the batch does not depend on
// the worker count (0 = hardware concurrency).
SampleBatch sample_exact(const PairDistribution& dist, std::size_t n_draws, std::uint64_t seed,
                         unsigned workers = 0);

// Single-spin-flip Metropolis chain on {-1, 1}^N. One sweep is N proposals
// at uniform random sites, plus one more with probability 1/2; (S1, S2) is recorded every `thin` sweeps after
// `burn_in` sweeps.
SampleBatch glauber_chain(const ModelParams& params, const ChainConfig& cfg);

// Sample mean and standard error (sample sd / sqrt(n)) of the scaled
// monomial (s1 / n1^g)^K (s2 / n2^g)^L over the batch.
MomentEstimate empirical_moments(const SampleBatch& batch, const MomentQuery& q);

}  // namespace cw2
