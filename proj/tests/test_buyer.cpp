#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "random_instances.hpp"

using namespace buyk;

namespace {

const Valuation kBoth{{4, 6}};

}  // namespace

TEST(BestResponse, CoffeeShop) {
  const auto [d, menu] = coffee_shop_instance();
  const BestResponse two = best_response(kBoth, menu, 2);
  EXPECT_EQ(two.multiset.indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(two.utility, Rational(4));
  EXPECT_EQ(two.payment, Rational(6));

  const BestResponse one = best_response(kBoth, menu, 1);
  EXPECT_EQ(one.multiset.indices, (std::vector<std::size_t>{3}));
  EXPECT_EQ(one.utility, Rational(2));
  EXPECT_EQ(one.payment, Rational(8));

  const BestResponse coffee = best_response(Valuation{{2, 0}}, menu, 1);
  EXPECT_EQ(coffee.multiset.indices, (std::vector<std::size_t>{1}));
  EXPECT_EQ(coffee.utility, Rational());
  EXPECT_EQ(coffee.payment, Rational(2));
}

TEST(BestResponse, EmptyMenuAndErrors) {
  const Menu empty{2, {}};
  for (std::size_t k = 1; k <= 3; ++k) {
    const BestResponse br = best_response(kBoth, empty, k);
    EXPECT_TRUE(br.multiset.empty());
    EXPECT_EQ(br.utility, Rational());
    EXPECT_EQ(br.payment, Rational());
  }
  EXPECT_THROW(best_response(kBoth, empty, 0), InstanceError);
  EXPECT_THROW(best_response(Valuation{{1}}, empty, 1), InstanceError);
}

TEST(BestResponse, RepeatsRandomizedEntries) {
  const Menu half{2, {{1, {{Rational(1, 2), 0}}}}};
  const BestResponse br = best_response(Valuation{{4, 0}}, half, 2);
  EXPECT_EQ(br.multiset.indices, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(br.utility, Rational(1));
}

TEST(BestResponse, NodeCap) {
  gen::Source src(3);
  const Menu m = src.menu(3, 12, false, 1);
  Limits tight;
  tight.max_search_nodes = 10;
  EXPECT_THROW(best_response(Valuation{{100, 100, 100}}, m, 4, tight), LimitExceeded);
}

TEST(BestResponse, MatchesUnprunedOracle) {
  gen::Source src(21);
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const std::size_t k = static_cast<std::size_t>(src.integer(1, 3));
    const Menu m = src.menu(n, static_cast<std::size_t>(src.integer(0, 4)), src.coin());
    const Valuation v = src.valuation(n);
    const BestResponse br = best_response(v, m, k);
    const auto ref = oracle::best_response(v, m, k);
    ASSERT_EQ(br.utility, ref.utility);
    ASSERT_EQ(br.payment, ref.payment);
    ASSERT_LE(br.multiset.size(), k);
    ASSERT_EQ(multiset_utility(v, br.multiset, m), br.utility);
    ASSERT_EQ(total_price(m, br.multiset), br.payment);
    ASSERT_TRUE(std::is_sorted(br.multiset.indices.begin(), br.multiset.indices.end()));
  }
}

TEST(BestResponse, MonotoneInK) {
  gen::Source src(22);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const Menu m = src.menu(n, 4, false);
    const Valuation v = src.valuation(n);
    Rational prev = best_response(v, m, 1).utility;
    for (std::size_t k = 2; k <= 4; ++k) {
      const Rational u = best_response(v, m, k).utility;
      ASSERT_GE(u, prev);
      prev = u;
    }
  }
}

TEST(BestResponse, PermutationInvariant) {
  gen::Source src(23);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const std::size_t k = static_cast<std::size_t>(src.integer(1, 3));
    const auto d = src.distribution(n, 3);
    Menu m = src.menu(n, 4, src.coin(), 4);
    const Rational rev = revenue_under_buyk(d, m, k);
    std::shuffle(m.entries.begin(), m.entries.end(), src.engine());
    ASSERT_EQ(revenue_under_buyk(d, m, k), rev);
    // the chosen entries are the same ones, wherever they sit
    for (const auto& a : d.support) {
      Menu copy = m;
      const BestResponse br = best_response(a.type, copy, k);
      std::reverse(copy.entries.begin(), copy.entries.end());
      const BestResponse rev_br = best_response(a.type, copy, k);
      std::vector<MenuEntry> x, y;
      for (auto i : br.multiset.indices) x.push_back(m.entry(i));
      for (auto i : rev_br.multiset.indices) y.push_back(copy.entry(i));
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      ASSERT_EQ(x, y);
    }
  }
}

TEST(VerifyIC, CoffeeShop) {
  const auto [d, menu] = coffee_shop_instance();
  const auto types = d.types();
  EXPECT_TRUE(verify_buyk_ic(menu, types, 1).ic);
  const ICVerdict two = verify_buyk_ic(menu, types, 2);
  EXPECT_FALSE(two.ic);
  ASSERT_EQ(two.witnesses.size(), 1U);
  EXPECT_EQ(two.witnesses[0].type, kBoth);
  EXPECT_EQ(two.witnesses[0].deviation.indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(two.witnesses[0].single_utility, Rational(2));
  EXPECT_EQ(two.witnesses[0].deviation_utility, Rational(4));
}

TEST(VerifyIC, GrandBundleAlwaysIC) {
  gen::Source src(24);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    Allocation all = Allocation::zero(n);
    for (auto& c : all.coords) c = 1;
    const Menu m{n, {{src.nonneg(20), all}}};
    std::vector<Valuation> types;
    for (int t = 0; t < 5; ++t) types.push_back(src.valuation(n));
    for (std::size_t k = 1; k <= 4; ++k) ASSERT_TRUE(verify_buyk_ic(m, types, k).ic);
  }
}

TEST(VerifyIC, DownwardClosedInK) {
  gen::Source src(25);
  int ic_found = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const Menu m = src.menu(n, static_cast<std::size_t>(src.integer(1, 3)), src.coin());
    std::vector<Valuation> types;
    for (int t = 0; t < 3; ++t) types.push_back(src.valuation(n));
    for (std::size_t k = 2; k <= 3; ++k) {
      if (!verify_buyk_ic(m, types, k).ic) continue;
      ++ic_found;
      for (std::size_t j = 1; j < k; ++j) ASSERT_TRUE(verify_buyk_ic(m, types, j).ic);
    }
  }
  EXPECT_GT(ic_found, 50);
}

TEST(Revenue, Examples) {
  const auto [d, menu] = coffee_shop_instance();
  EXPECT_EQ(revenue_under_buyk(d, menu, 1), Rational(14, 3));
  EXPECT_EQ(revenue_under_buyk(d, menu, 2), Rational(4));
  EXPECT_EQ(revenue_under_buyk(d, Menu{2, {}}, 3), Rational());
}

TEST(Revenue, MatchesOracle) {
  gen::Source src(26);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const std::size_t k = static_cast<std::size_t>(src.integer(1, 3));
    const auto d = src.distribution(n, static_cast<std::size_t>(src.integer(1, 4)));
    const Menu m = src.menu(n, 3, src.coin(), 6);
    ASSERT_EQ(revenue_under_buyk(d, m, k), oracle::revenue(d, m, k));
  }
}

TEST(Adaptive, Examples) {
  const Menu half{2, {{1, {{Rational(1, 2), 0}}}}};
  const Valuation v{{4, 0}};
  EXPECT_EQ(adaptive_value(v, half, 2), Rational(3, 2));
  EXPECT_EQ(best_response(v, half, 2).utility, Rational(1));
  const std::vector<Valuation> one{v};
  EXPECT_FALSE(verify_adaptive_buyk_ic(half, one, 2).ic);

  const Menu two{2, {{Rational(3, 2), {{1, 0}}}, {1, {{Rational(1, 2), 0}}}}};
  EXPECT_EQ(best_response(v, two, 1).utility, Rational(5, 2));
  EXPECT_EQ(adaptive_value(v, two, 2), Rational(5, 2));  // the sure entry alone already attains it
  EXPECT_TRUE(verify_adaptive_buyk_ic(two, one, 2).ic);

  const auto [d, menu] = coffee_shop_instance();
  EXPECT_EQ(adaptive_value(kBoth, menu, 2), Rational(4));
}

TEST(Adaptive, StateSpaceCap) {
  const Menu m{13, {}};
  EXPECT_THROW(adaptive_value(Valuation{std::vector<Rational>(13)}, m, 1), LimitExceeded);
}

TEST(Adaptive, MatchesRecursionOracle) {
  gen::Source src(27);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 3));
    const std::size_t k = static_cast<std::size_t>(src.integer(1, 3));
    const Menu m = src.menu(n, static_cast<std::size_t>(src.integer(0, 3)), src.coin());
    const Valuation v = src.valuation(n);
    ASSERT_EQ(adaptive_value(v, m, k), oracle::adaptive(v, m, k));
  }
}

TEST(Adaptive, DominatesNonAdaptiveAndEqualsOnDeterministic) {
  gen::Source src(28);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 4));
    const std::size_t k = static_cast<std::size_t>(src.integer(1, 3));
    const bool det = src.coin();
    const Menu m = src.menu(n, static_cast<std::size_t>(src.integer(1, 4)), det);
    const Valuation v = src.valuation(n);
    const Rational a = adaptive_value(v, m, k);
    const Rational u = best_response(v, m, k).utility;
    if (det)
      ASSERT_EQ(a, u);
    else
      ASSERT_GE(a, u);
  }
}
