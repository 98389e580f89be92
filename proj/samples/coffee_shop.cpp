// Buy-one vs buy-two revenue of the coffee shop menu.

#include <iostream>

#include "buyk/buyk.hpp"

int main() {
  using namespace buyk;
  const auto [dist, menu] = coffee_shop_instance();
  const auto types = dist.types();
  for (std::size_t k = 1; k <= 2; ++k) {
    std::cout << "buy-" << k << ": revenue " << revenue_under_buyk(dist, menu, k).str() << ", IC "
              << (verify_buyk_ic(menu, types, k).ic ? "yes" : "no") << "\n";
  }
  std::cout << "BRev " << brev(dist).value.str() << ", optimal buy-one " << optimal_buy_one(dist).value.str()
            << "\n";
}
