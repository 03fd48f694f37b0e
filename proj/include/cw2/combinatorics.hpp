#pragma once

// Multiindex bookkeeping: multiplicities, profile vectors, profile classes
// and exact multiplicity counts. Integer arithmetic only.

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>
#include <vector>

namespace cw2 {

using BigInt = boost::multiprecision::cpp_int;

// An ordered tuple (i_1, ..., i_L) over the universe {1, ..., n}.
class MultiIndex {
 public:
  // Throws std::invalid_argument if empty or any entry is outside [1, n].
  MultiIndex(std::vector<int> entries, int n);

  const std::vector<int>& entries() const { return entries_; }
  int n() const { return n_; }
  int length() const { return static_cast<int>(entries_.size()); }

  // nu_j: number of positions holding index j.
  int multiplicity(int j) const;

 private:
  std::vector<int> entries_;
  int n_;
};

// Profile vector r = (r_1, ..., r_L): r_l counts distinct indices occurring
// exactly l times, with sum_l l * r_l = L. Stored sparsely as (l, r_l) pairs
// with r_l > 0, sorted by l.
class ProfileVector {
 public:
  // Dense form (r_1, ..., r_L); length is L. Throws std::invalid_argument if
  // the weighted sum is not L or an entry is negative.
  explicit ProfileVector(const std::vector<int>& dense);

  int l_total() const { return l_total_; }
  int count(int l) const;
  std::vector<int> dense() const;
  const std::vector<std::pair<int, int>>& parts() const { return parts_; }
  // Number of distinct indices, sum_l r_l.
  int distinct() const;

  friend bool operator==(const ProfileVector&, const ProfileVector&) = default;
  friend auto operator<=>(const ProfileVector& a, const ProfileVector& b) {
    return a.dense() <=> b.dense();
  }

 private:
  int l_total_;
  std::vector<std::pair<int, int>> parts_;
};

struct ProfileClass {
  bool in_pi_k = false;     // r_1 == k
  bool in_pi_zero = false;  // no index repeated 3 or more times
  bool in_pi_plus = false;  // some index repeated 3 or more times
};

inline constexpr int kMaxProfileLength = 20;

ProfileVector profile_of(const MultiIndex& idx);

// All profile vectors of length L, one per integer partition of L, in
// lexicographic order of their dense form. Throws std::length_error unless
// 1 <= L <= 20.
std::vector<ProfileVector> enumerate_profiles(int l_total);

ProfileClass classify_profile(const ProfileVector& r, int k);

// Number of multiindices in {1..n}^L with profile r:
//   n! / (r_1! ... r_L! r_0!) * L! / (1!^{r_1} ... L!^{r_L}),  r_0 = n - sum r_l.
// Throws std::domain_error if n < sum r_l.
BigInt w_count(const ProfileVector& r, int n);

// p(L) by the standard part-size recurrence.
BigInt partition_count(int l_total);

}  // namespace cw2
