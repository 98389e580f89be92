// Cover-free lower-bound instance for small n and k.

#include <cstdlib>
#include <iostream>

#include "buyk/buyk.hpp"

int main(int argc, char** argv) {
  using namespace buyk;
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4;
  const std::size_t k = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 1;
  const LowerBoundInstance inst = lowerbound_instance(n, k);
  std::cout << "family size " << inst.family->size() << "\n";
  std::cout << "BuyKRev " << inst.report.buyk_revenue.str() << "\n";
  std::cout << "BRev    " << inst.report.brev.str() << "\n";
  std::cout << "ratio   " << inst.report.ratio.str() << " (~" << inst.report.ratio.approx() << ")\n";
}
