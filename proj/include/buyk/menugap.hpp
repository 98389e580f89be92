#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "buyk/core.hpp"

namespace buyk {

/**
 * Paired sequences X = x_1..x_N (valuations) and Q = q_0..q_N
 * (allocations) with q_0 = 0^n. Index i of X is stored at X[i - 1].
 */
struct SequencePair {
  std::size_t n = 0;
  std::vector<Valuation> X;
  std::vector<Allocation> Q;

  std::size_t length() const { return X.size(); }

  /// Builds the pair from points (x_i, q_i), i >= 1, prepending q_0 = 0^n.
  static SequencePair from_points(std::size_t n, std::vector<Valuation> xs, const std::vector<Allocation>& qs) {
    SequencePair s{n, std::move(xs), {Allocation::zero(n)}};
    s.Q.insert(s.Q.end(), qs.begin(), qs.end());
    return s;
  }

  /// X = Q = standard basis of R^n.
  static SequencePair standard_basis(std::size_t n) {
    std::vector<Valuation> xs;
    std::vector<Allocation> qs;
    for (std::size_t j = 0; j < n; ++j) {
      qs.push_back(Allocation::unit(n, j));
      xs.push_back({qs.back().coords});
    }
    return from_points(n, std::move(xs), qs);
  }
};

inline Diagnostics validate(const SequencePair& s) {
  Diagnostics out;
  if (s.Q.size() != s.X.size() + 1) out.push_back("|Q| must equal |X| + 1");
  if (s.Q.empty() || s.Q.front() != Allocation::zero(s.n)) out.push_back("Q[0] must be the zero vector");
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    const std::string where = "X[" + std::to_string(i + 1) + "]";
    validate_valuation(s.X[i], s.n, where, out);
    if (s.X[i].dim() == s.n && s.X[i].l1_norm().sign() <= 0) out.push_back(where + ": l1 norm must be positive");
  }
  for (std::size_t i = 0; i < s.Q.size(); ++i) validate_allocation(s.Q[i], s.n, "Q[" + std::to_string(i) + "]", out);
  return out;
}

struct GapResult {
  Rational value;
  std::vector<std::size_t> witness;  // k indices into Q, nondecreasing
};

struct GapReport {
  std::vector<Rational> gaps;        // unnormalized, index i at [i - 1]
  std::vector<Rational> normalized;  // gaps[i] / ||x_i||_1
  std::vector<std::vector<std::size_t>> witnesses;
  Rational menugap;
};

namespace detail {

inline std::size_t multiset_count(std::size_t pool, std::size_t k, std::size_t cap) {
  // C(pool + k - 1, k), saturating at cap + 1
  if (pool == 0) return 0;
  long double c = 1;
  for (std::size_t t = 1; t <= k; ++t) {
    c = c * static_cast<long double>(pool - 1 + t) / static_cast<long double>(t);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(c + 0.5L);
}

class GapSearch {
 public:
  GapSearch(const SequencePair& s, std::size_t k, std::size_t i) : s_(s), k_(k), i_(i) {}

  GapResult run() {
    std::vector<Rational> miss(s_.n, Rational(1));
    picked_.clear();
    found_ = false;
    descend(0, miss);
    return {best_, best_witness_};
  }

 private:
  void descend(std::size_t start, const std::vector<Rational>& miss) {
    if (picked_.size() == k_) {
      const Valuation& x = s_.X[i_ - 1];
      const Allocation& q = s_.Q[i_];
      Rational value;
      for (std::size_t j = 0; j < s_.n; ++j) value += x.values[j] * (q.coords[j] - (Rational(1) - miss[j]));
      // ties resolve to the lexicographically last multiset (real predecessors over the null entry)
      if (!found_ || value <= best_) {
        best_ = std::move(value);
        best_witness_ = picked_;
        found_ = true;
      }
      return;
    }
    for (std::size_t idx = start; idx < i_; ++idx) {
      std::vector<Rational> next = miss;
      for (std::size_t j = 0; j < s_.n; ++j) next[j] *= Rational(1) - s_.Q[idx].coords[j];
      picked_.push_back(idx);
      descend(idx, next);
      picked_.pop_back();
    }
  }

  const SequencePair& s_;
  std::size_t k_, i_;
  std::vector<std::size_t> picked_;
  Rational best_;
  std::vector<std::size_t> best_witness_;
  bool found_ = false;
};

}  // namespace detail

/**
 * Gap_k^i(X, Q) = min over multisets {j_1..j_k} of indices < i (repetition
 * and the null index 0 allowed) of x_i . (q_i - Lot(q_j1, ..., q_jk)).
 * Unnormalized. Exhaustive.
 */
inline GapResult gap(const SequencePair& s, std::size_t k, std::size_t i, const Limits& limits = default_limits()) {
  if (k == 0) throw InstanceError("k must be a positive integer");
  if (i == 0 || i > s.length()) throw std::out_of_range("gap index " + std::to_string(i) + " out of range");
  if (detail::multiset_count(i, k, limits.max_search_nodes) > limits.max_search_nodes)
    throw LimitExceeded("gap enumeration exceeds node cap");
  return detail::GapSearch(s, k, i).run();
}

/// Gap_k^i / ||x_i||_1.
inline Rational normalized_gap(const SequencePair& s, std::size_t k, std::size_t i,
                               const Limits& limits = default_limits()) {
  return gap(s, k, i, limits).value / s.X.at(i - 1).l1_norm();
}

/// MenuGap_k(X, Q) = sum_i Gap_k^i / ||x_i||_1, with the per-index breakdown.
inline GapReport menugap(const SequencePair& s, std::size_t k, const Limits& limits = default_limits()) {
  require_valid(s);
  GapReport r;
  for (std::size_t i = 1; i <= s.length(); ++i) {
    GapResult g = gap(s, k, i, limits);
    Rational norm = g.value / s.X[i - 1].l1_norm();
    r.menugap += norm;
    r.gaps.push_back(std::move(g.value));
    r.normalized.push_back(std::move(norm));
    r.witnesses.push_back(std::move(g.witness));
  }
  return r;
}

/// Repeatedly drops the earliest pair with gap <= 0 until every gap is
/// strictly positive.
inline SequencePair prune_nonpositive(SequencePair s, std::size_t k, const Limits& limits = default_limits()) {
  require_valid(s);
  for (;;) {
    std::size_t drop = 0;
    for (std::size_t i = 1; i <= s.length(); ++i) {
      if (gap(s, k, i, limits).value.sign() <= 0) {
        drop = i;
        break;
      }
    }
    if (drop == 0) return s;
    s.X.erase(s.X.begin() + static_cast<std::ptrdiff_t>(drop - 1));
    s.Q.erase(s.Q.begin() + static_cast<std::ptrdiff_t>(drop));
  }
}

/**
 * sum_i sum_d max(q_{i,d} - m_{i-1,d}, 0) where m_{i-1} is the coordinate-wise
 * max of q_0..q_{i-1}. Each coordinate telescopes inside [0, 1], so the
 * result is at most n; it upper-bounds MenuGap_n.
 */
inline Rational telescoping_certificate(std::span<const Allocation> Q) {
  if (Q.empty()) return {};
  const std::size_t n = Q.front().dim();
  std::vector<Rational> running_max = Q.front().coords;
  Rational total;
  for (std::size_t i = 1; i < Q.size(); ++i) {
    check_dim(n, Q[i].dim(), "allocation");
    for (std::size_t d = 0; d < n; ++d) {
      if (Q[i].coords[d] > running_max[d]) {
        total += Q[i].coords[d] - running_max[d];
        running_max[d] = Q[i].coords[d];
      }
    }
  }
  return total;
}

/// The coordinate-max witness {i*_1, ..., i*_n} for index i: for each
/// coordinate, the earliest index < i attaining the running max.
inline std::vector<std::size_t> coordinate_max_witness(const SequencePair& s, std::size_t i) {
  std::vector<std::size_t> w(s.n, 0);
  for (std::size_t d = 0; d < s.n; ++d)
    for (std::size_t j = 1; j < i; ++j)
      if (s.Q[j].coords[d] > s.Q[w[d]].coords[d]) w[d] = j;
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace buyk
