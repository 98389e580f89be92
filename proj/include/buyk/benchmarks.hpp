#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "buyk/buyer.hpp"
#include "buyk/core.hpp"
#include "buyk/simplex.hpp"

namespace buyk {

/// A benchmark value and the object that attains it (a price, a price
/// vector, or a menu).
template <class Certificate>
struct BenchmarkResult {
  Rational value;
  Certificate certificate;
};

/// Revenue of posting `price` for the grand bundle.
inline Rational bundle_revenue(const DiscreteDistribution& d, const Rational& price) {
  Rational mass;
  for (const auto& a : d.support)
    if (a.type.bundle_value() >= price) mass += a.prob;
  return price * mass;
}

/// Optimal grand-bundle price. Candidates are the support bundle values;
/// among tied prices the smallest is reported.
inline BenchmarkResult<Rational> brev(const DiscreteDistribution& d) {
  BenchmarkResult<Rational> best{};
  std::set<Rational> candidates;
  for (const auto& a : d.support) candidates.insert(a.type.bundle_value());
  for (const auto& p : candidates) {
    Rational r = bundle_revenue(d, p);
    if (r > best.value) best = {std::move(r), p};
  }
  return best;
}

/// Revenue of posting price[j] for item j separately to an additive buyer
/// who buys item j whenever v_j >= price[j].
inline Rational item_pricing_revenue(const DiscreteDistribution& d, const std::vector<Rational>& prices) {
  check_dim(d.n, prices.size(), "price vector");
  Rational total;
  for (std::size_t j = 0; j < d.n; ++j) {
    Rational mass;
    for (const auto& a : d.support)
      if (a.type.values[j] >= prices[j]) mass += a.prob;
    total += prices[j] * mass;
  }
  return total;
}

/// Optimal item pricing; decomposes into one posted-price problem per item.
inline BenchmarkResult<std::vector<Rational>> srev(const DiscreteDistribution& d) {
  BenchmarkResult<std::vector<Rational>> out{Rational(), std::vector<Rational>(d.n)};
  for (std::size_t j = 0; j < d.n; ++j) {
    std::set<Rational> candidates;
    for (const auto& a : d.support)
      if (a.type.values[j].sign() > 0) candidates.insert(a.type.values[j]);
    Rational best_rev;
    Rational best_price;
    for (const auto& p : candidates) {
      Rational mass;
      for (const auto& a : d.support)
        if (a.type.values[j] >= p) mass += a.prob;
      Rational r = p * mass;
      if (r > best_rev) {
        best_rev = std::move(r);
        best_price = p;
      }
    }
    out.value += best_rev;
    out.certificate[j] = best_price;
  }
  return out;
}

/// The item-pricing mechanism as a deterministic menu of single items
/// (buy-n with these entries reproduces item pricing).
inline Menu item_pricing_menu(std::size_t n, const std::vector<Rational>& prices) {
  check_dim(n, prices.size(), "price vector");
  Menu m{n, {}};
  for (std::size_t j = 0; j < n; ++j) m.entries.push_back({prices[j], Allocation::unit(n, j)});
  return m;
}

/**
 * Builds the buy-one revenue LP: one allocation vector q(v) in [0,1]^n and one
 * price p(v) >= 0 per support type, maximizing sum f(v) p(v) under IR and
 * pairwise IC. Variable layout: type t occupies [t(n+1), t(n+1)+n], price last.
 */
inline LinearProgram buy_one_program(const DiscreteDistribution& d) {
  const std::size_t n = d.n;
  const std::size_t s = d.support.size();
  const std::size_t stride = n + 1;
  LinearProgram lp(s * stride);
  for (std::size_t t = 0; t < s; ++t) lp.objective[t * stride + n] = d.support[t].prob;

  for (std::size_t t = 0; t < s; ++t)
    for (std::size_t j = 0; j < n; ++j) lp.add_upper_bound(t * stride + j, 1);

  for (std::size_t t = 0; t < s; ++t) {
    const auto& v = d.support[t].type.values;
    // IR: p(t) - v.q(t) <= 0
    auto& ir = lp.add_row(0).coeffs;
    for (std::size_t j = 0; j < n; ++j) ir[t * stride + j] = -v[j];
    ir[t * stride + n] = 1;
    // IC: v.q(u) - p(u) - v.q(t) + p(t) <= 0
    for (std::size_t u = 0; u < s; ++u) {
      if (u == t) continue;
      auto& ic = lp.add_row(0).coeffs;
      for (std::size_t j = 0; j < n; ++j) {
        ic[t * stride + j] = -v[j];
        ic[u * stride + j] = v[j];
      }
      ic[t * stride + n] = 1;
      ic[u * stride + n] = -1;
    }
  }
  return lp;
}

/**
 * Revenue-optimal buy-one mechanism, solved exactly. The certificate is the
 * induced menu: one entry per support type, with null entries and exact
 * duplicates dropped, in canonical order.
 */
inline BenchmarkResult<Menu> optimal_buy_one(const DiscreteDistribution& d, const Limits& limits = default_limits()) {
  require_valid(d);
  const LinearProgram lp = buy_one_program(d);
  const LpSolution sol = solve(lp, limits);
  if (sol.status != LpStatus::optimal)
    throw PostconditionFailure("buy-one program did not reach an optimum");

  const std::size_t n = d.n;
  const std::size_t stride = n + 1;
  std::set<MenuEntry> entries;
  for (std::size_t t = 0; t < d.support.size(); ++t) {
    MenuEntry e{sol.x[t * stride + n], Allocation::zero(n)};
    for (std::size_t j = 0; j < n; ++j) e.alloc.coords[j] = sol.x[t * stride + j];
    if (e.price.is_zero() && e.alloc.is_zero()) continue;
    entries.insert(std::move(e));
  }
  Menu menu{n, {entries.begin(), entries.end()}};
  return {sol.value, std::move(menu)};
}

struct MenuSizeCheck {
  Rational revenue;          // revenue_under_buyk(D, M, k)
  Rational size_times_brev;  // |M| * BRev(D)
  bool holds = false;        // |M| * BRev >= revenue
};

inline MenuSizeCheck menu_size_revenue_bound(const DiscreteDistribution& d, const Menu& menu, std::size_t k,
                                             const Limits& limits = default_limits()) {
  MenuSizeCheck out;
  out.revenue = revenue_under_buyk(d, menu, k, limits);
  out.size_times_brev = Rational(menu.size()) * brev(d).value;
  out.holds = out.size_times_brev >= out.revenue;
  return out;
}

}  // namespace buyk
