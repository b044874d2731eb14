#pragma once

// Forward map from BNF data to the semiclassical spectrum: ordered
// enumeration of <omega|k>, per-level hbar expansions, and the
// partition-function identity.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "birkhoff/bnf.hpp"
#include "birkhoff/scalars.hpp"

namespace birkhoff::spectrum {

struct PsiEntry {
  int n = 0;  // 1-based level index
  std::vector<int> k;
  Surd value;  // <omega|k>
};

struct PsiTable {
  int dim = 1;
  std::vector<Surd> omegas;
  std::vector<PsiEntry> entries;  // strictly increasing values
  std::map<std::vector<int>, int> index;  // k -> N

  std::optional<int> level_of(const std::vector<int>& k) const;
};

// First m lattice points of Z>=0^d by increasing <omega|k>. Throws
// DEPENDENT_FREQUENCIES on a tie and INVALID_INPUT for non-positive or
// unsorted frequencies.
PsiTable psi_enumerate(const std::vector<Surd>& omegas, int m);

// The first m values of <omega|k> for frequencies on a common basis.
std::vector<ExactReal> lattice_values(const std::vector<ExactReal>& omegas, int m);

// a_0 = E0, a_1 = E1 + <omega, k + 1/2>, a_j = P_j(k) for 2 <= j <= order.
std::vector<Surd> eigenvalue_expansion(const bnf::BNFData& bnf, const std::vector<int>& k,
                                       int order);

struct SpectralDataset {
  std::optional<int> dim;
  int order = 1;
  BasisPtr basis;
  std::vector<std::vector<ExactReal>> levels;  // levels[N - 1][j] = a_j(N)

  // Throws INVALID_INPUT unless every level has order + 1 coefficients on
  // the shared basis.
  void validate() const;
};

// Levels are computed in parallel.
SpectralDataset spectrum_forward(const bnf::BNFData& bnf, int m, int order);

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

struct PartitionSample {
  double z = 0;
  HighPrecision closed_form;    // e^{-z mu_1} prod (1 - e^{-z omega_j})^{-1}
  HighPrecision truncated_sum;  // sum_{N <= M} e^{-z mu_N}
  HighPrecision difference;     // closed_form - truncated_sum
  // e^{-z mu_1} e^{-z nu_{M+1}/2} prod (1 - e^{-z omega_j / 2})^{-1}
  HighPrecision tail_bound;
  // e^{-z mu_{M+1}} / (1 - e^{-z gap}), gap the smallest enumerated spacing
  HighPrecision gap_estimate;
  bool within_bound = false;  // 0 <= difference <= tail_bound
};

struct PartitionReport {
  int levels = 0;
  bool multiset_equal = false;
  std::vector<PartitionSample> samples;

  bool passed() const;
};

// Checks that {mu_N - mu_1 : N <= M} is the multiset of the first M values
// of <omega|k> (throws MULTISET_MISMATCH naming the first offending value)
// and compares the truncated Dirichlet series with the closed form at each
// z >= 0.1.
PartitionReport partition_identity_check(const std::vector<ExactReal>& mu,
                                         const std::vector<Surd>& omegas,
                                         const std::vector<double>& zs);

// Same check for the pure oscillator E1 + <omega, k + 1/2>.
PartitionReport partition_identity_check(const std::vector<Surd>& omegas, const Surd& e1, int m,
                                         const std::vector<double>& zs);

std::string to_decimal(const HighPrecision& value, int digits = 20);

}  // namespace birkhoff::spectrum
