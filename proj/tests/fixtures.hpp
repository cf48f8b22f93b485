#ifndef OMIN_TESTS_FIXTURES_HPP_INCLUDED
#define OMIN_TESTS_FIXTURES_HPP_INCLUDED

#include "omin/routing.hpp"

#include <vector>

namespace fixtures {

// 8-input example: 0->7 1->0 2->5 3->2 4->3 5->6 6->1 7->4.
inline constexpr const char *kWorkedExampleText =
    "# eight-input example\n0 7\n1 0\n2 5\n3 2\n4 3\n5 6\n6 1\n7 4\n";

inline const std::vector<omin::Line> kWorkedExampleDest{7, 0, 5, 2, 3, 6, 1, 4};

inline omin::NetworkSpec omega(std::uint32_t n) {
  return omin::build_network(n, omin::Topology::Omega);
}

inline omin::PermutationMap worked_example() {
  return omin::permutation_from_destinations(omega(8), kWorkedExampleDest);
}

inline omin::PermutationMap identity(std::uint32_t size) {
  std::vector<omin::Line> d(size);
  for (std::uint32_t i = 0; i < size; ++i)
    d[i] = i;
  return omin::permutation_from_destinations(omega(size), d);
}

} // namespace fixtures

#endif // OMIN_TESTS_FIXTURES_HPP_INCLUDED
