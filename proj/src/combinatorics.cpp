#include "cw2/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cw2 {

MultiIndex::MultiIndex(std::vector<int> entries, int n) : entries_(std::move(entries)), n_(n) {
  if (entries_.empty()) throw std::invalid_argument("multiindex must have length >= 1");
  for (int e : entries_)
    if (e < 1 || e > n_)
      throw std::invalid_argument("multiindex entry " + std::to_string(e) + " outside [1, " +
                                  std::to_string(n_) + "]");
}

int MultiIndex::multiplicity(int j) const {
  return static_cast<int>(std::count(entries_.begin(), entries_.end(), j));
}

ProfileVector::ProfileVector(const std::vector<int>& dense)
    : l_total_(static_cast<int>(dense.size())) {
  long long weighted = 0;
  for (int l = 1; l <= l_total_; ++l) {
    const int r = dense[l - 1];
    if (r < 0) throw std::invalid_argument("profile entries must be nonnegative");
    if (r > 0) parts_.emplace_back(l, r);
    weighted += static_cast<long long>(l) * r;
  }
  if (weighted != l_total_)
    throw std::invalid_argument("profile violates sum_l l * r_l = L");
}

int ProfileVector::count(int l) const {
  for (const auto& [len, r] : parts_)
    if (len == l) return r;
  return 0;
}

std::vector<int> ProfileVector::dense() const {
  std::vector<int> d(static_cast<std::size_t>(l_total_), 0);
  for (const auto& [l, r] : parts_) d[l - 1] = r;
  return d;
}

int ProfileVector::distinct() const {
  int s = 0;
  for (const auto& part : parts_) s += part.second;
  return s;
}

ProfileVector profile_of(const MultiIndex& idx) {
  auto sorted = idx.entries();
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> dense(sorted.size(), 0);
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    ++dense[j - i - 1];
    i = j;
  }
  return ProfileVector(dense);
}

std::vector<ProfileVector> enumerate_profiles(int l_total) {
  if (l_total < 1 || l_total > kMaxProfileLength)
    throw std::length_error("profile length must be in [1, " +
                            std::to_string(kMaxProfileLength) + "]");
  std::vector<ProfileVector> out;
  std::vector<int> dense(static_cast<std::size_t>(l_total), 0);
  // Partitions with parts taken in non-increasing order; each partition's
  // multiplicity signature is one profile.
  auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(dense);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      ++dense[part - 1];
      self(self, remaining - part, part);
      --dense[part - 1];
    }
  };
  recurse(recurse, l_total, l_total);
  std::sort(out.begin(), out.end());
  return out;
}

ProfileClass classify_profile(const ProfileVector& r, int k) {
  ProfileClass c;
  c.in_pi_k = r.count(1) == k;
  c.in_pi_plus = std::any_of(r.parts().begin(), r.parts().end(),
                             [](const auto& part) { return part.first >= 3; });
  c.in_pi_zero = !c.in_pi_plus;
  return c;
}

namespace {

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

BigInt w_count(const ProfileVector& r, int n) {
  const int distinct = r.distinct();
  if (n < distinct)
    throw std::domain_error("need at least " + std::to_string(distinct) +
                            " distinct indices, universe has " + std::to_string(n));
  // n! / r_0! as a falling factorial.
  BigInt num = 1;
  for (int i = 0; i < distinct; ++i) num *= n - i;
  num *= factorial(r.l_total());
  BigInt den = 1;
  for (const auto& [l, count] : r.parts()) {
    den *= factorial(count);
    const BigInt lf = factorial(l);
    for (int c = 0; c < count; ++c) den *= lf;
  }
  return num / den;
}

BigInt partition_count(int l_total) {
  if (l_total < 0) throw std::invalid_argument("partition count of a negative integer");
  std::vector<BigInt> p(static_cast<std::size_t>(l_total) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= l_total; ++part)
    for (int v = part; v <= l_total; ++v) p[v] += p[v - part];
  return p[l_total];
}

}  // namespace cw2
