#pragma once

#include <cstddef>
#include <vector>

#include "birkhoff/scalars.hpp"

namespace birkhoff::linalg {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct SolveResult {
  std::size_t rank = 0;
  bool consistent = false;
  // Valid only when rank == unknowns and consistent; one column per rhs.
  RationalMatrix solution;
};

// Gauss-Jordan over Q.
// a is rows x unknowns, rhs is rows x k.
SolveResult solve(RationalMatrix a, RationalMatrix rhs);

std::size_t rank(RationalMatrix a);

}  // namespace birkhoff::linalg
