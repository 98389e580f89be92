#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "buyk/core.hpp"

namespace buyk {

/// Sets over {1, ..., ground_size}, each kept sorted; `k` is the cover-free
/// parameter the family is certified for.
struct CoverFreeFamily {
  std::size_t ground_size = 0;
  std::vector<std::vector<std::size_t>> sets;
  std::size_t k = 0;

  std::size_t size() const { return sets.size(); }
};

struct CoverFreeCheck {
  bool ok = true;
  /// On failure: indices into the family, covered set first, then the
  /// sets whose union contains it.
  std::vector<std::size_t> counterexample;
};

namespace detail {

using Mask = std::vector<std::uint64_t>;

inline Mask to_mask(const std::vector<std::size_t>& set, std::size_t ground) {
  Mask m((ground + 63) / 64, 0);
  for (std::size_t e : set) {
    if (e == 0 || e > ground) throw InstanceError("set element " + std::to_string(e) + " outside ground set");
    m[(e - 1) / 64] |= std::uint64_t{1} << ((e - 1) % 64);
  }
  return m;
}

inline bool subset_of(const Mask& a, const Mask& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

/// Searches for `need` distinct members (from `pool`, skipping `exclude`)
/// whose union with `acc` covers `target`.
inline bool find_cover(const Mask& target, const std::vector<Mask>& pool, std::size_t exclude, std::size_t start,
                       std::size_t need, Mask& acc, std::vector<std::size_t>& chosen) {
  if (subset_of(target, acc)) return true;
  if (need == 0) return false;
  for (std::size_t i = start; i < pool.size(); ++i) {
    if (i == exclude) continue;
    Mask saved = acc;
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= pool[i][w];
    chosen.push_back(i);
    if (find_cover(target, pool, exclude, i + 1, need - 1, acc, chosen)) return true;
    chosen.pop_back();
    acc = std::move(saved);
  }
  return false;
}

inline double tuple_count(std::size_t family, std::size_t k) {
  double c = 1;
  for (std::size_t t = 0; t <= k; ++t) c *= static_cast<double>(family);
  return c;
}

}  // namespace detail

/**
 * Brute-force k-cover-free check: no member is contained in the union of k
 * other members. Covering by fewer than k others also counts as a violation
 * whenever at least k others exist, since padding with further members only
 * grows the union.
 */
inline CoverFreeCheck verify_coverfree(const CoverFreeFamily& f, std::size_t k,
                                       const Limits& limits = default_limits()) {
  if (detail::tuple_count(f.size(), k) > static_cast<double>(limits.coverfree_budget))
    throw LimitExceeded("cover-free verification exceeds brute-force budget");
  CoverFreeCheck out;
  if (f.size() < k + 1) return out;  // no k + 1 distinct members
  std::vector<detail::Mask> masks;
  masks.reserve(f.size());
  for (const auto& s : f.sets) masks.push_back(detail::to_mask(s, f.ground_size));
  for (std::size_t a = 0; a < masks.size(); ++a) {
    detail::Mask acc(masks[a].size(), 0);
    std::vector<std::size_t> chosen;
    if (detail::find_cover(masks[a], masks, a, 0, k, acc, chosen)) {
      out.ok = false;
      out.counterexample.push_back(a);
      out.counterexample.insert(out.counterexample.end(), chosen.begin(), chosen.end());
      return out;
    }
  }
  return out;
}

namespace detail {

/// All nonempty subsets of [n] ordered by size, then lexicographically.
inline std::vector<std::vector<std::size_t>> canonical_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> cur(size);
    for (std::size_t i = 0; i < size; ++i) cur[i] = i + 1;
    for (;;) {
      out.push_back(cur);
      std::size_t pos = size;
      while (pos > 0 && cur[pos - 1] == n - size + pos) --pos;
      if (pos == 0) break;
      ++cur[pos - 1];
      for (std::size_t i = pos; i < size; ++i) cur[i] = cur[i - 1] + 1;
    }
  }
  return out;
}

/// Whether the family stays k-cover-free after appending `candidate`,
/// assuming it was before.
inline bool extends_coverfree(const std::vector<Mask>& family, const Mask& candidate, std::size_t k) {
  if (family.size() < k) return true;  // still fewer than k + 1 members after adding
  Mask acc(candidate.size(), 0);
  std::vector<std::size_t> chosen;
  const std::size_t none = family.size();
  if (find_cover(candidate, family, none, 0, k, acc, chosen)) return false;
  for (std::size_t a = 0; a < family.size(); ++a) {
    Mask start = candidate;
    chosen.clear();
    if (find_cover(family[a], family, a, 0, k - 1, start, chosen)) return false;
  }
  return true;
}

}  // namespace detail

/// Greedy maximal k-cover-free family over [n], scanning subsets by size
/// then lex order. Maximal, not necessarily maximum.
inline CoverFreeFamily greedy_coverfree(std::size_t n, std::size_t k, const Limits& limits = default_limits()) {
  if (n == 0 || k == 0) throw InstanceError("greedy_coverfree needs n >= 1 and k >= 1");
  if (n > limits.greedy_max_ground)
    throw LimitExceeded("ground set too large for greedy search; use kautz_singleton");
  CoverFreeFamily f{n, {}, k};
  std::vector<detail::Mask> masks;
  for (auto& s : detail::canonical_subsets(n)) {
    detail::Mask m = detail::to_mask(s, n);
    if (detail::extends_coverfree(masks, m, k)) {
      masks.push_back(std::move(m));
      f.sets.push_back(std::move(s));
    }
  }
  if (!verify_coverfree(f, k, limits).ok) throw PostconditionFailure("greedy family failed cover-free check");
  return f;
}

/// Largest k-cover-free family over [n] by exhaustive backtracking. Only for
/// very small ground sets.
inline CoverFreeFamily maximum_coverfree(std::size_t n, std::size_t k, const Limits& limits = default_limits()) {
  if (n == 0 || k == 0) throw InstanceError("maximum_coverfree needs n >= 1 and k >= 1");
  if (n > limits.exhaustive_max_ground) throw LimitExceeded("ground set too large for exhaustive search");
  const auto subsets = detail::canonical_subsets(n);
  std::vector<detail::Mask> all;
  for (const auto& s : subsets) all.push_back(detail::to_mask(s, n));

  std::vector<std::size_t> best, cur;
  std::vector<detail::Mask> cur_masks;
  auto search = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() > best.size()) best = cur;
    if (cur.size() + (all.size() - start) <= best.size()) return;
    for (std::size_t i = start; i < all.size(); ++i) {
      if (!detail::extends_coverfree(cur_masks, all[i], k)) continue;
      cur.push_back(i);
      cur_masks.push_back(all[i]);
      self(self, i + 1);
      cur.pop_back();
      cur_masks.pop_back();
    }
  };
  search(search, 0);

  CoverFreeFamily f{n, {}, k};
  for (std::size_t i : best) f.sets.push_back(subsets[i]);
  return f;
}

inline bool is_prime(std::size_t q) {
  if (q < 2) return false;
  for (std::size_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

/**
 * Reed-Solomon family over GF(q): one set {(x, P(x)) : x in GF(q)} per
 * polynomial P of degree < m, on a ground set of q^2 points, element
 * (x, y) numbered x*q + y + 1. Distinct polynomials agree on at most m - 1
 * points, so the family is k-cover-free whenever k(m - 1) < q. The recorded
 * k is the largest such value (q^m - 1 when m = 1: the sets are disjoint).
 */
inline CoverFreeFamily kautz_singleton(std::size_t q, std::size_t m, const Limits& limits = default_limits()) {
  if (!is_prime(q)) throw InstanceError("kautz_singleton needs a prime field size, got " + std::to_string(q));
  if (m < 1 || m > q) throw InstanceError("kautz_singleton needs 1 <= m <= q");

  std::size_t count = 1;
  for (std::size_t t = 0; t < m; ++t) count *= q;

  CoverFreeFamily f;
  f.ground_size = q * q;
  f.k = m == 1 ? count - 1 : (q + (m - 1) - 1) / (m - 1) - 1;

  std::vector<std::size_t> coeffs(m, 0);
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t rest = p;
    for (std::size_t t = 0; t < m; ++t) {
      coeffs[t] = rest % q;
      rest /= q;
    }
    std::vector<std::size_t> set;
    set.reserve(q);
    for (std::size_t x = 0; x < q; ++x) {
      std::size_t y = 0;  // Horner over GF(q)
      for (std::size_t t = m; t-- > 0;) y = (y * x + coeffs[t]) % q;
      set.push_back(x * q + y + 1);
    }
    f.sets.push_back(std::move(set));
  }

  // pairwise agreement bound, then brute force when affordable
  std::vector<detail::Mask> masks;
  for (const auto& s : f.sets) masks.push_back(detail::to_mask(s, f.ground_size));
  for (std::size_t a = 0; a < masks.size(); ++a)
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      std::size_t common = 0;
      for (std::size_t w = 0; w < masks[a].size(); ++w)
        common += static_cast<std::size_t>(__builtin_popcountll(masks[a][w] & masks[b][w]));
      if (common > m - 1) throw PostconditionFailure("Reed-Solomon sets intersect beyond m - 1");
    }
  if (detail::tuple_count(f.size(), f.k) <= static_cast<double>(limits.coverfree_budget) &&
      !verify_coverfree(f, f.k, limits).ok)
    throw PostconditionFailure("Kautz-Singleton family failed cover-free check");
  return f;
}

/// Indicator vector of a set over [n].
inline std::vector<Rational> indicator(const std::vector<std::size_t>& set, std::size_t n) {
  std::vector<Rational> v(n);
  for (std::size_t e : set) v.at(e - 1) = 1;
  return v;
}

}  // namespace buyk
