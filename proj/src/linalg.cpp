#include "birkhoff/linalg.hpp"

#include <utility>

namespace birkhoff::linalg {

namespace {

// Reduces [a | rhs] in place to reduced row echelon form; returns the pivot
// column of each pivot row.
std::vector<std::size_t> eliminate(RationalMatrix& a, RationalMatrix& rhs,
                                   std::size_t unknowns) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = a.size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < unknowns && row < rows; ++col) {
    std::size_t pick = row;
    while (pick < rows && sgn(a[pick][col]) == 0) ++pick;
    if (pick == rows) continue;
    std::swap(a[pick], a[row]);
    if (!rhs.empty()) std::swap(rhs[pick], rhs[row]);

    const Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    if (!rhs.empty()) {
      for (auto& v : rhs[row]) v *= inv;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = col; c < unknowns; ++c) a[r][c] -= f * a[row][c];
      if (!rhs.empty()) {
        for (std::size_t c = 0; c < rhs[r].size(); ++c) {
          rhs[r][c] -= f * rhs[row][c];
        }
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

SolveResult solve(RationalMatrix a, RationalMatrix rhs) {
  SolveResult out;
  const std::size_t unknowns = a.empty() ? 0 : a.front().size();
  const std::size_t k = rhs.empty() ? 0 : rhs.front().size();
  const auto pivots = eliminate(a, rhs, unknowns);
  out.rank = pivots.size();

  out.consistent = true;
  for (std::size_t r = out.rank; r < a.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      if (sgn(rhs[r][c]) != 0) out.consistent = false;
    }
  }
  if (out.rank == unknowns && out.consistent) {
    out.solution.assign(unknowns, std::vector<Rational>(k));
    for (std::size_t r = 0; r < out.rank; ++r) {
      out.solution[pivots[r]] = rhs[r];
    }
  }
  return out;
}

std::size_t rank(RationalMatrix a) {
  RationalMatrix none;
  const std::size_t unknowns = a.empty() ? 0 : a.front().size();
  return eliminate(a, none, unknowns).size();
}

}  // namespace birkhoff::linalg
