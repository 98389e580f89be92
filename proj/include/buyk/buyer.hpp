#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "buyk/core.hpp"

namespace buyk {

/// The buyer's chosen purchase. `multiset` omits null-entry padding.
struct BestResponse {
  EntryMultiset multiset;
  Rational utility;
  Rational payment;
};

struct ICWitness {
  Valuation type;
  EntryMultiset deviation;     // empty for adaptive witnesses
  Rational single_utility;     // best utility from at most one entry
  Rational deviation_utility;  // best buy-k (or adaptive) utility
};

struct ICVerdict {
  bool ic = true;
  std::vector<ICWitness> witnesses;
};

namespace detail {

/**
 * Depth-first search over multisets of menu options in canonical order.
 *
 * Entries are visited sorted by price, so once the running price exceeds the
 * bundle value every extension has negative utility and the branch is cut.
 * Deterministic entries are never repeated: a second copy leaves Lot
 * unchanged and adds price.
 */
class BestResponseSearch {
 public:
  BestResponseSearch(const Valuation& v, const Menu& menu, std::size_t k, const Limits& limits)
      : v_(v), menu_(menu), k_(k), limits_(limits), order_(menu.canonical_order()) {
    bundle_ = v.bundle_value();
    deterministic_.reserve(order_.size());
    for (std::size_t idx : order_) deterministic_.push_back(menu.entry(idx).alloc.is_deterministic());
  }

  BestResponse run() {
    std::vector<Rational> miss(menu_.n, Rational(1));
    best_ranks_.clear();
    best_utility_ = Rational();
    best_payment_ = Rational();
    ranks_.clear();
    nodes_ = 0;
    descend(0, miss, Rational());

    BestResponse out;
    out.utility = best_utility_;
    out.payment = best_payment_;
    for (std::size_t r : best_ranks_) out.multiset.indices.push_back(order_[r]);
    std::sort(out.multiset.indices.begin(), out.multiset.indices.end());
    return out;
  }

 private:
  void consider(const std::vector<Rational>& miss, const Rational& price) {
    Rational value;
    for (std::size_t j = 0; j < miss.size(); ++j) value += v_.values[j] * (Rational(1) - miss[j]);
    Rational utility = value - price;
    const bool better = utility > best_utility_ ||
                        (utility == best_utility_ &&
                         (price > best_payment_ || (price == best_payment_ && ranks_ < best_ranks_)));
    if (better) {
      best_utility_ = std::move(utility);
      best_payment_ = price;
      best_ranks_ = ranks_;
    }
  }

  void descend(std::size_t start, const std::vector<Rational>& miss, const Rational& price) {
    if (++nodes_ > limits_.max_search_nodes) throw LimitExceeded("best-response search exceeded node cap");
    if (!ranks_.empty()) consider(miss, price);
    if (ranks_.size() == k_) return;
    for (std::size_t r = start; r < order_.size(); ++r) {
      const MenuEntry& e = menu_.entry(order_[r]);
      Rational next_price = price + e.price;
      if (next_price > bundle_) break;
      std::vector<Rational> next_miss = miss;
      for (std::size_t j = 0; j < next_miss.size(); ++j) next_miss[j] *= Rational(1) - e.alloc.coords[j];
      ranks_.push_back(r);
      descend(deterministic_[r] ? r + 1 : r, next_miss, next_price);
      ranks_.pop_back();
    }
  }

  const Valuation& v_;
  const Menu& menu_;
  std::size_t k_;
  const Limits& limits_;
  std::vector<std::size_t> order_;
  std::vector<bool> deterministic_;
  Rational bundle_;

  std::vector<std::size_t> ranks_;
  std::vector<std::size_t> best_ranks_;
  Rational best_utility_;
  Rational best_payment_;
  std::size_t nodes_ = 0;
};

inline void check_k(std::size_t k) {
  if (k == 0) throw InstanceError("k must be a positive integer");
}

}  // namespace detail

/**
 * Exact non-adaptive buy-k best response.
 *
 * Maximizes v . Lot(L) - sum p over multisets L of at most k options.
 * Ties go to the larger payment, then to the lexicographically smallest
 * multiset in canonical (price, allocation, index) order, so the choice does
 * not depend on how the menu is listed.
 */
inline BestResponse best_response(const Valuation& v, const Menu& menu, std::size_t k,
                                  const Limits& limits = default_limits()) {
  detail::check_k(k);
  check_dim(menu.n, v.dim(), "valuation");
  require_valid(menu);
  return detail::BestResponseSearch(v, menu, k, limits).run();
}

inline ICVerdict verify_buyk_ic(const Menu& menu, std::span<const Valuation> types, std::size_t k,
                                const Limits& limits = default_limits()) {
  detail::check_k(k);
  require_valid(menu);
  ICVerdict verdict;
  for (const auto& v : types) {
    const BestResponse single = best_response(v, menu, 1, limits);
    const BestResponse multi = k == 1 ? single : best_response(v, menu, k, limits);
    if (multi.utility > single.utility)
      verdict.witnesses.push_back({v, multi.multiset, single.utility, multi.utility});
  }
  verdict.ic = verdict.witnesses.empty();
  return verdict;
}

/// Expected payment when every type buys its buy-k best response.
inline Rational revenue_under_buyk(const DiscreteDistribution& d, const Menu& menu, std::size_t k,
                                   const Limits& limits = default_limits()) {
  detail::check_k(k);
  check_dim(d.n, menu.n, "menu");
  Rational revenue;
  for (const auto& atom : d.support) revenue += atom.prob * best_response(atom.type, menu, k, limits).payment;
  return revenue;
}

/**
 * Value of the optimal adaptive buy-k strategy.
 *
 * State (S, t): S = items already won, t = purchases left.
 *   V(S, t) = max(0, max_e -p_e + sum_W Pr[W | e, S] (v(W) + V(S u W, t - 1)))
 * where W ranges over subsets of the items outside S, each drawn
 * independently with the entry's allocation probability.
 */
inline Rational adaptive_value(const Valuation& v, const Menu& menu, std::size_t k,
                               const Limits& limits = default_limits()) {
  detail::check_k(k);
  check_dim(menu.n, v.dim(), "valuation");
  const std::size_t n = menu.n;
  if (n > limits.adaptive_max_items || n >= 63) throw LimitExceeded("state space too large");
  const std::uint64_t states = std::uint64_t{1} << n;

  std::vector<Rational> prev(states);  // V(., t - 1)
  std::vector<Rational> cur(states);
  for (std::size_t t = 1; t <= k; ++t) {
    for (std::uint64_t s = 0; s < states; ++s) {
      Rational best;
      for (const auto& e : menu.entries) {
        std::uint64_t sure = 0;
        std::vector<std::size_t> uncertain;
        for (std::size_t j = 0; j < n; ++j) {
          if (s >> j & 1U) continue;
          const Rational& qj = e.alloc.coords[j];
          if (qj.is_zero()) continue;
          if (qj == Rational(1))
            sure |= std::uint64_t{1} << j;
          else
            uncertain.push_back(j);
        }
        Rational sure_value;
        for (std::size_t j = 0; j < n; ++j)
          if (sure >> j & 1U) sure_value += v.values[j];

        Rational expected;
        const std::uint64_t outcomes = std::uint64_t{1} << uncertain.size();
        for (std::uint64_t u = 0; u < outcomes; ++u) {
          Rational prob(1);
          Rational won = sure_value;
          std::uint64_t w = sure;
          for (std::size_t b = 0; b < uncertain.size(); ++b) {
            const std::size_t j = uncertain[b];
            if (u >> b & 1U) {
              prob *= e.alloc.coords[j];
              won += v.values[j];
              w |= std::uint64_t{1} << j;
            } else {
              prob *= Rational(1) - e.alloc.coords[j];
            }
          }
          expected += prob * (won + prev[s | w]);
        }
        Rational option = expected - e.price;
        if (option > best) best = std::move(option);
      }
      cur[s] = std::move(best);
    }
    std::swap(prev, cur);
  }
  return prev[0];
}

/// IC against adaptive strategies: best single-entry utility must weakly
/// beat the optimal adaptive value.
inline ICVerdict verify_adaptive_buyk_ic(const Menu& menu, std::span<const Valuation> types, std::size_t k,
                                         const Limits& limits = default_limits()) {
  detail::check_k(k);
  require_valid(menu);
  if (menu.n > limits.adaptive_max_items) throw LimitExceeded("state space too large");
  ICVerdict verdict;
  for (const auto& v : types) {
    const Rational single = best_response(v, menu, 1, limits).utility;
    const Rational adaptive = adaptive_value(v, menu, k, limits);
    if (adaptive > single) verdict.witnesses.push_back({v, {}, single, adaptive});
  }
  verdict.ic = verdict.witnesses.empty();
  return verdict;
}

}  // namespace buyk
