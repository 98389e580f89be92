#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "buyk/rational.hpp"

namespace buyk {

/// Raised when an input violates the shape of the instance (dimension
/// mismatch, bad index, non-positive k, precondition failure).
class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a configured enumeration or state-space cap would be exceeded.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a construction fails the checks it runs on its own output.
class PostconditionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration and state-space caps shared by the search routines.
struct Limits {
  std::size_t max_search_nodes = 50'000'000;    // best-response / gap enumeration
  std::size_t adaptive_max_items = 12;          // 2^n DP states
  std::size_t lp_max_cells = 4'000'000;         // rows x columns of the simplex tableau
  std::size_t coverfree_budget = 100'000'000;   // |F|^(k+1) brute-force tuples
  std::size_t greedy_max_ground = 12;           // subsets enumerated by greedy_coverfree
  std::size_t exhaustive_max_ground = 5;        // maximum_coverfree
};

inline const Limits& default_limits() {
  static const Limits limits{};
  return limits;
}

/// Probability of receiving each item.
struct Allocation {
  std::vector<Rational> coords;

  std::size_t dim() const { return coords.size(); }

  static Allocation zero(std::size_t n) { return {std::vector<Rational>(n)}; }

  static Allocation unit(std::size_t n, std::size_t j) {
    Allocation a = zero(n);
    a.coords.at(j) = 1;
    return a;
  }

  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c.is_zero(); });
  }

  /// Every coordinate is 0 or 1.
  bool is_deterministic() const {
    return std::all_of(coords.begin(), coords.end(),
                       [](const Rational& c) { return c.is_zero() || c == Rational(1); });
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

/// Additive valuation: value of item j is values[j] >= 0.
struct Valuation {
  std::vector<Rational> values;

  std::size_t dim() const { return values.size(); }

  Rational l1_norm() const {
    Rational s;
    for (const auto& v : values) s += abs(v);
    return s;
  }

  /// Value of the grand bundle.
  Rational bundle_value() const {
    Rational s;
    for (const auto& v : values) s += v;
    return s;
  }

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend auto operator<=>(const Valuation&, const Valuation&) = default;
};

inline Rational dot(const Valuation& v, const Allocation& q) {
  if (v.dim() != q.dim()) throw InstanceError("dimension mismatch between valuation and allocation");
  Rational s;
  for (std::size_t j = 0; j < v.dim(); ++j) s += v.values[j] * q.coords[j];
  return s;
}

struct MenuEntry {
  Rational price;
  Allocation alloc;

  friend bool operator==(const MenuEntry&, const MenuEntry&) = default;
  friend auto operator<=>(const MenuEntry&, const MenuEntry&) = default;
};

/**
 * A menu of priced lotteries over n items.
 *
 * Option index 0 is the free null entry (price 0, zero allocation); it is
 * never stored. Option i >= 1 refers to entries[i - 1]. Duplicate entries are
 * allowed.
 */
struct Menu {
  std::size_t n = 0;
  std::vector<MenuEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  const MenuEntry& entry(std::size_t option) const {
    if (option == 0 || option > entries.size())
      throw std::out_of_range("menu option " + std::to_string(option) + " does not name a stored entry");
    return entries[option - 1];
  }

  Rational price(std::size_t option) const { return option == 0 ? Rational() : entry(option).price; }

  /// Option indices 1..size() ordered by (price, allocation, original index).
  std::vector<std::size_t> canonical_order() const {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& ea = entries[a - 1];
      const auto& eb = entries[b - 1];
      if (ea.price != eb.price) return ea.price < eb.price;
      return ea.alloc < eb.alloc;
    });
    return order;
  }
};

/// One atom of a finite distribution.
struct Atom {
  Valuation type;
  Rational prob;
};

/**
 * Finite-support distribution over additive valuations. Probabilities sum to
 * at most one; the residual mass sits on the zero valuation.
 */
struct DiscreteDistribution {
  std::size_t n = 0;
  std::vector<Atom> support;

  Rational total_mass() const {
    Rational s;
    for (const auto& a : support) s += a.prob;
    return s;
  }

  Rational residual_mass() const { return Rational(1) - total_mass(); }

  std::vector<Valuation> types() const {
    std::vector<Valuation> out;
    out.reserve(support.size());
    for (const auto& a : support) out.push_back(a.type);
    return out;
  }
};

/// Multiset of menu option indices, kept in nondecreasing order. Index 0
/// (the null entry) may appear and counts toward the cardinality.
struct EntryMultiset {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  friend bool operator==(const EntryMultiset&, const EntryMultiset&) = default;
};

inline void check_dim(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual)
    throw InstanceError(std::string("dimension mismatch: ") + what + " has " + std::to_string(actual) +
                        " coordinates, expected " + std::to_string(expected));
}

/**
 * Per-item success probability of receiving every lottery independently:
 * result_j = 1 - prod_i (1 - allocs[i]_j). The empty list gives 0^n.
 */
inline Allocation lot(std::span<const Allocation> allocs, std::size_t n) {
  std::vector<Rational> miss(n, Rational(1));
  for (const auto& a : allocs) {
    check_dim(n, a.dim(), "allocation");
    for (std::size_t j = 0; j < n; ++j) miss[j] *= Rational(1) - a.coords[j];
  }
  Allocation out = Allocation::zero(n);
  for (std::size_t j = 0; j < n; ++j) out.coords[j] = Rational(1) - miss[j];
  return out;
}

inline Allocation lot(const Menu& menu, const EntryMultiset& lam) {
  std::vector<Allocation> picked;
  picked.reserve(lam.size());
  for (std::size_t idx : lam.indices) {
    if (idx == 0) continue;
    picked.push_back(menu.entry(idx).alloc);
  }
  return lot(picked, menu.n);
}

inline Rational total_price(const Menu& menu, const EntryMultiset& lam) {
  Rational s;
  for (std::size_t idx : lam.indices) s += menu.price(idx);
  return s;
}

/// v . Lot(lam) - sum of prices in lam (with multiplicity).
inline Rational multiset_utility(const Valuation& v, const EntryMultiset& lam, const Menu& menu) {
  check_dim(menu.n, v.dim(), "valuation");
  return dot(v, lot(menu, lam)) - total_price(menu, lam);
}

// --- validation -------------------------------------------------------------

using Diagnostics = std::vector<std::string>;

inline void validate_allocation(const Allocation& a, std::size_t n, const std::string& where, Diagnostics& out) {
  if (a.dim() != n) {
    out.push_back(where + ": dimension " + std::to_string(a.dim()) + " != " + std::to_string(n));
    return;
  }
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (a.coords[j] < Rational(0) || a.coords[j] > Rational(1))
      out.push_back(where + "[" + std::to_string(j) + "]: coordinate out of [0,1]");
  }
}

inline void validate_valuation(const Valuation& v, std::size_t n, const std::string& where, Diagnostics& out) {
  if (v.dim() != n) {
    out.push_back(where + ": dimension " + std::to_string(v.dim()) + " != " + std::to_string(n));
    return;
  }
  for (std::size_t j = 0; j < v.dim(); ++j)
    if (v.values[j].sign() < 0) out.push_back(where + "[" + std::to_string(j) + "]: negative value");
}

inline Diagnostics validate(const Menu& menu) {
  Diagnostics out;
  for (std::size_t i = 0; i < menu.entries.size(); ++i) {
    const std::string where = "entry " + std::to_string(i + 1);
    if (menu.entries[i].price.sign() < 0) out.push_back(where + ": negative price");
    validate_allocation(menu.entries[i].alloc, menu.n, where + " allocation", out);
  }
  return out;
}

inline Diagnostics validate(const DiscreteDistribution& d) {
  Diagnostics out;
  std::set<Valuation> seen;
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    const std::string where = "support " + std::to_string(i);
    validate_valuation(d.support[i].type, d.n, where, out);
    if (d.support[i].prob.sign() <= 0) out.push_back(where + ": probability must be positive");
    if (!seen.insert(d.support[i].type).second) out.push_back(where + ": duplicate support type");
  }
  if (d.total_mass() > Rational(1)) out.push_back("mass exceeds one");
  return out;
}

template <class T>
void require_valid(const T& value) {
  const auto diags = validate(value);
  if (!diags.empty()) throw InstanceError(diags.front());
}

}  // namespace buyk
