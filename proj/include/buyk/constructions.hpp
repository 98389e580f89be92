#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "buyk/benchmarks.hpp"
#include "buyk/buyer.hpp"
#include "buyk/core.hpp"
#include "buyk/coverfree.hpp"
#include "buyk/menugap.hpp"

namespace buyk {

// --- built-in instances -------------------------------------------------------

/// Coffee (item 0) and bagel (item 1): three equally likely buyers and the
/// menu coffee@2, bagel@4, both@8.
inline std::pair<DiscreteDistribution, Menu> coffee_shop_instance() {
  const Rational third(1, 3);
  DiscreteDistribution d{2, {{{{2, 0}}, third}, {{{0, 4}}, third}, {{{4, 6}}, third}}};
  Menu m{2, {{2, {{1, 0}}}, {4, {{0, 1}}}, {8, {{1, 1}}}}};
  return {std::move(d), std::move(m)};
}

/// Support {2^j e_j w.p. 2^-j : j = 1..n}, residual mass at zero.
/// Item pricing earns exactly n while bundling earns 2 - 2^(1-n) < 2.
inline DiscreteDistribution srev_gap_instance(std::size_t n) {
  if (n == 0) throw InstanceError("srev_gap_instance needs n >= 1");
  DiscreteDistribution d{n, {}};
  for (std::size_t j = 1; j <= n; ++j) {
    const Rational scale = Rational::pow(Rational(2), j);
    Valuation v{std::vector<Rational>(n)};
    v.values[j - 1] = scale;
    d.support.push_back({std::move(v), Rational(1) / scale});
  }
  if (srev(d).value != Rational(n)) throw PostconditionFailure("srev_gap_instance: SRev != n");
  if (!(brev(d).value < Rational(2))) throw PostconditionFailure("srev_gap_instance: BRev >= 2");
  return d;
}

// --- upper-bound menu surgery -------------------------------------------------

inline Menu filter_min_price(const Menu& menu, const Rational& c) {
  Menu out{menu.n, {}};
  for (const auto& e : menu.entries)
    if (e.price >= c) out.entries.push_back(e);
  return out;
}

/// Band t of a price p >= c: the t with c*base^t <= p < c*base^(t+1).
inline std::size_t band_index(const Rational& price, const Rational& c, std::size_t base) {
  if (c.sign() <= 0) throw InstanceError("band threshold c must be positive");
  if (base < 2) throw InstanceError("band base must be at least 2");
  if (price < c) throw InstanceError("price " + price.str() + " below band threshold " + c.str());
  std::size_t t = 0;
  Rational upper = c * Rational(base);
  while (price >= upper) {
    upper *= Rational(base);
    ++t;
  }
  return t;
}

/// Splits into entries in even bands [c b^(2i), c b^(2i+1)) and odd bands
/// [c b^(2i+1), c b^(2i+2)).
inline std::pair<Menu, Menu> band_split(const Menu& menu, const Rational& c, std::size_t base) {
  std::pair<Menu, Menu> out{Menu{menu.n, {}}, Menu{menu.n, {}}};
  for (const auto& e : menu.entries) {
    auto& side = band_index(e.price, c, base) % 2 == 0 ? out.first : out.second;
    side.entries.push_back(e);
  }
  return out;
}

struct PipelineStage {
  std::string name;
  Menu menu;
  Rational value;  // buy-k revenue of `menu`, or MenuGap for the final stage
};

struct BinRecord {
  std::size_t band = 0;
  Rational mass;               // Pr(type purchases in this band)
  Rational min_price;          // cheapest purchased entry in the band
  std::size_t representative;  // support index of the minimal-norm buyer
  Rational bundle_bound;       // BRev (1 + delta) / ||x_rep||_1, bounds `mass`
};

struct PipelineTrace {
  std::vector<PipelineStage> stages;
  std::vector<BinRecord> bins;
};

struct ExtractedSequences {
  SequencePair sequences;
  PipelineTrace trace;
};

/**
 * Bins the support by the price band of what each type buys under buy-k
 * (a multi-entry purchase is binned by its most expensive entry) and takes
 * the minimal-norm buyer of every nonempty bin as its representative. X is the
 * representatives in increasing band order; Q is what they buy. Bands have
 * ratio `base`, k + 1 unless given.
 */
inline ExtractedSequences extract_sequences(const DiscreteDistribution& d, const Menu& menu, std::size_t k,
                                            const Rational& c, const Rational& delta,
                                            std::optional<std::size_t> band_base = std::nullopt,
                                            const Limits& limits = default_limits()) {
  if (delta.sign() < 0) throw InstanceError("delta must be non-negative");
  check_dim(d.n, menu.n, "menu");
  const std::size_t base = band_base.value_or(k + 1);

  struct Bin {
    bool seen = false;
    Rational mass;
    Rational min_price;
    std::optional<std::size_t> rep;
    Rational rep_norm;
    Allocation rep_alloc;
  };
  std::map<std::size_t, Bin> bins;

  for (std::size_t s = 0; s < d.support.size(); ++s) {
    const auto& atom = d.support[s];
    const BestResponse br = best_response(atom.type, menu, k, limits);
    if (br.multiset.empty()) continue;
    Rational top;
    for (std::size_t idx : br.multiset.indices) top = max(top, menu.price(idx));
    Bin& bin = bins[band_index(top, c, base)];
    bin.mass += atom.prob;
    if (!bin.seen || top < bin.min_price) bin.min_price = top;
    bin.seen = true;
    const Rational norm = atom.type.l1_norm();
    if (norm.sign() > 0 && (!bin.rep.has_value() || norm < bin.rep_norm)) {
      bin.rep = s;
      bin.rep_norm = norm;
      bin.rep_alloc = lot(menu, br.multiset);
    }
  }

  ExtractedSequences out;
  out.sequences = SequencePair{d.n, {}, {Allocation::zero(d.n)}};
  const Rational bundle = bins.empty() ? Rational() : brev(d).value;
  for (auto& [band, bin] : bins) {
    if (!bin.rep.has_value()) continue;
    out.sequences.X.push_back(d.support[*bin.rep].type);
    out.sequences.Q.push_back(bin.rep_alloc);
    out.trace.bins.push_back(
        {band, bin.mass, bin.min_price, *bin.rep, bundle * (Rational(1) + delta) / bin.rep_norm});
  }
  return out;
}

/// Outcome of running the whole surgery on one menu and checking
/// MenuGap_k(X, Q) >= (Rev - c) / (2 (k+1)^2 BRev (1 + delta)).
struct UpperBoundPipeline {
  ExtractedSequences extracted;
  Rational revenue;  // buy-k revenue of the input menu
  Rational c;
  Rational delta;
  Rational brev;
  Rational menugap;
  Rational bound;
  bool holds = false;
};

/// Default pipeline constants: c = Rev/100, delta = 0 (minimal-norm
/// representatives are exact on finite support).
inline UpperBoundPipeline run_upper_bound_pipeline(const DiscreteDistribution& d, const Menu& menu, std::size_t k,
                                                   std::optional<Rational> c = std::nullopt,
                                                   std::optional<Rational> delta = std::nullopt,
                                                   const Limits& limits = default_limits()) {
  UpperBoundPipeline r;
  r.extracted.sequences = SequencePair{d.n, {}, {Allocation::zero(d.n)}};
  r.revenue = revenue_under_buyk(d, menu, k, limits);
  r.c = c.value_or(r.revenue / Rational(100));
  r.delta = delta.value_or(Rational());
  r.brev = brev(d).value;

  auto& stages = r.extracted.trace.stages;
  stages.push_back({"input", menu, r.revenue});

  Menu selected{menu.n, {}};
  if (r.c.sign() > 0) {
    const Menu filtered = filter_min_price(menu, r.c);
    stages.push_back({"filtered", filtered, revenue_under_buyk(d, filtered, k, limits)});
    auto [even, odd] = band_split(filtered, r.c, k + 1);
    const Rational even_rev = revenue_under_buyk(d, even, k, limits);
    const Rational odd_rev = revenue_under_buyk(d, odd, k, limits);
    stages.push_back({"even bands", even, even_rev});
    stages.push_back({"odd bands", odd, odd_rev});
    selected = even_rev >= odd_rev ? std::move(even) : std::move(odd);
    stages.push_back({"selected", selected, max(even_rev, odd_rev)});

    PipelineTrace trace = std::move(r.extracted.trace);
    r.extracted = extract_sequences(d, selected, k, r.c, r.delta, std::nullopt, limits);
    trace.bins = std::move(r.extracted.trace.bins);
    r.extracted.trace = std::move(trace);
  }

  r.menugap = menugap(r.extracted.sequences, k, limits).menugap;
  r.extracted.trace.stages.push_back({"sequences", selected, r.menugap});
  const Rational kk(k + 1);
  const Rational denom = Rational(2) * kk * kk * r.brev * (Rational(1) + r.delta);
  r.bound = denom.is_zero() ? Rational() : (r.revenue - r.c) / denom;
  r.holds = r.menugap >= r.bound;
  return r;
}

// --- lower-bound pipeline -----------------------------------------------------

struct LowerBoundReport {
  Rational buyk_revenue;
  Rational brev;
  Rational ratio;
  Rational menugap;
};

struct LowerBoundInstance {
  DiscreteDistribution distribution;
  Menu menu;
  SequencePair sequences;
  std::size_t k = 0;
  std::optional<CoverFreeFamily> family;
  LowerBoundReport report;
  Rational ratio_bound;    // |F| / (2 n^2), when built from a family
  Rational menugap_bound;  // |F| / n, when built from a family
};

/**
 * Turns binary sequences with every normalized gap >= 1/n into a
 * distribution and a deterministic menu: v_i = C_i x_i with f(v_i) = 1/C_i,
 * C_i = (n+1)^(2i), and entry i = (C_i g_i, q_i) with g_i the normalized gap.
 * Revenue then equals MenuGap_k exactly; the checks below re-derive that,
 * buy-k IC of the menu, and BRev <= 2n.
 */
inline LowerBoundInstance sequences_to_instance(const SequencePair& s, std::size_t k,
                                                const Limits& limits = default_limits()) {
  require_valid(s);
  const std::size_t n = s.n;
  auto binary = [](const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& c) { return c.is_zero() || c == Rational(1); });
  };
  for (std::size_t i = 1; i <= s.length(); ++i)
    if (!binary(s.X[i - 1].values) || !binary(s.Q[i].coords))
      throw InstanceError("sequences_to_instance needs 0/1 vectors (index " + std::to_string(i) + ")");

  const GapReport gaps = menugap(s, k, limits);
  const Rational floor_gap(1, static_cast<long>(n));
  for (std::size_t i = 0; i < gaps.normalized.size(); ++i)
    if (gaps.normalized[i] < floor_gap)
      throw InstanceError("normalized gap at index " + std::to_string(i + 1) + " is " + gaps.normalized[i].str() +
                          ", below 1/n");

  LowerBoundInstance out;
  out.k = k;
  out.sequences = s;
  out.distribution = {n, {}};
  out.menu = {n, {}};
  const Rational step = Rational::pow(Rational(n + 1), 2);
  Rational scale(1);
  for (std::size_t i = 1; i <= s.length(); ++i) {
    scale *= step;
    Valuation v = s.X[i - 1];
    for (auto& c : v.values) c *= scale;
    out.distribution.support.push_back({std::move(v), Rational(1) / scale});
    out.menu.entries.push_back({scale * gaps.normalized[i - 1], s.Q[i]});
  }

  out.report.menugap = gaps.menugap;
  out.report.buyk_revenue = revenue_under_buyk(out.distribution, out.menu, k, limits);
  out.report.brev = brev(out.distribution).value;
  out.report.ratio = out.report.brev.is_zero() ? Rational() : out.report.buyk_revenue / out.report.brev;

  const auto types = out.distribution.types();
  if (!verify_buyk_ic(out.menu, types, k, limits).ic) throw PostconditionFailure("constructed menu is not buy-k IC");
  if (out.report.buyk_revenue != out.report.menugap)
    throw PostconditionFailure("constructed revenue " + out.report.buyk_revenue.str() + " != MenuGap " +
                               out.report.menugap.str());
  if (out.report.brev > Rational(2 * n)) throw PostconditionFailure("BRev exceeds 2n");
  return out;
}

enum class CoverFreeMethod { greedy, kautz_singleton };

struct LowerBoundOptions {
  CoverFreeMethod method = CoverFreeMethod::greedy;
  std::optional<std::size_t> q;  // Kautz-Singleton field size; default sqrt(n)
  std::size_t m = 2;             // Kautz-Singleton polynomial degree bound
};

/// Cover-free family over [n] -> X = Q = indicator vectors -> distribution
/// and menu, with the finite-scale bounds ratio >= |F|/(2n^2) and
/// MenuGap >= |F|/n checked.
inline LowerBoundInstance lowerbound_instance(std::size_t n, std::size_t k, const LowerBoundOptions& opts = {},
                                              const Limits& limits = default_limits()) {
  if (n == 0 || k == 0) throw InstanceError("lowerbound_instance needs n >= 1 and k >= 1");
  CoverFreeFamily family;
  if (opts.method == CoverFreeMethod::greedy) {
    family = greedy_coverfree(n, k, limits);
  } else {
    std::size_t q = opts.q.value_or(0);
    if (q == 0)
      while ((q + 1) * (q + 1) <= n) ++q;
    if (q * q != n) throw InstanceError("Kautz-Singleton needs n = q^2");
    family = kautz_singleton(q, opts.m, limits);
    if (family.k < k)
      throw InstanceError("Kautz-Singleton(" + std::to_string(q) + ", " + std::to_string(opts.m) +
                          ") certifies only k = " + std::to_string(family.k));
  }
  if (!verify_coverfree(family, k, limits).ok) throw PostconditionFailure("family is not k-cover-free");

  std::vector<Valuation> xs;
  std::vector<Allocation> qs;
  for (const auto& set : family.sets) {
    qs.push_back({indicator(set, n)});
    xs.push_back({qs.back().coords});
  }
  LowerBoundInstance inst = sequences_to_instance(SequencePair::from_points(n, std::move(xs), qs), k, limits);

  const Rational fam(family.size());
  inst.ratio_bound = fam / Rational(2 * n * n);
  inst.menugap_bound = fam / Rational(n);
  inst.family = std::move(family);
  if (inst.report.menugap < inst.menugap_bound) throw PostconditionFailure("MenuGap below |F|/n");
  if (inst.report.ratio < inst.ratio_bound) throw PostconditionFailure("revenue ratio below |F|/(2n^2)");
  return inst;
}

}  // namespace buyk
