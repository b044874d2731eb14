#pragma once

// Inverse map: from a spectral dataset recover E0, E1, the frequencies, the
// polynomials P_j and the BNF coefficients c_{l,alpha}.

#include <map>
#include <optional>
#include <vector>

#include "birkhoff/bnf.hpp"
#include "birkhoff/scalars.hpp"
#include "birkhoff/spectrum.hpp"

namespace birkhoff::inverse {

struct LevelData {
  ExactReal e0;
  std::vector<ExactReal> mu;  // mu_N = a_1(N)
};

// Throws INCONSISTENT_E0 listing every level whose a_0 differs from a_0(1).
LevelData extract_e0_e1(const spectrum::SpectralDataset& dataset);

struct SieveResult {
  std::vector<ExactReal> omegas;  // strictly increasing
  int dim = 0;
  ExactReal coverage;  // nu_M: frequencies above it cannot be seen
};

// Throws EMPTY_INPUT, INVALID_INPUT (mu not strictly increasing),
// MULTISET_MISMATCH (nu is not the value list of the discovered
// frequencies), DIMENSION_MISMATCH (expected_dim disagrees) and
// AMBIGUOUS_TAIL (largest frequency above nu_M / 2 with no expected_dim).
SieveResult sieve_omegas(const std::vector<ExactReal>& mu,
                         std::optional<int> expected_dim = std::nullopt);

struct ApproxSieveResult {
  std::vector<double> omegas;
  int dim = 0;
  double coverage = 0;
};

// Float variant: equality and membership are tested up to eps.
ApproxSieveResult sieve_omegas_approx(const std::vector<double>& mu, double eps = 1e-9,
                                      std::optional<int> expected_dim = std::nullopt);

struct ClusterPolynomial {
  int degree = 0;
  int dim = 1;
  std::map<std::vector<int>, ExactReal> coeffs;  // Z^beta -> coefficient, zeros omitted

  ExactReal evaluate(const std::vector<int>& k, const BasisPtr& basis) const;
};

// Interpolates a_j on the simplex lattice {|k| <= j} and checks every other
// level. Throws INSUFFICIENT_LEVELS or OVERDETERMINED_MISMATCH.
ClusterPolynomial recover_pj(const spectrum::SpectralDataset& dataset,
                             const spectrum::PsiTable& psi, int j);

// c_{j - |alpha|, alpha} from P_j(Z) = sum c (Z + 1/2)^alpha.
bnf::BNFData recover_c(const std::vector<ClusterPolynomial>& polynomials,
                       const std::vector<Surd>& omegas, const Surd& e0, const Surd& e1);

// Requires order >= 2 and a basis without opaque elements.
bnf::BNFData invert_spectrum(const spectrum::SpectralDataset& dataset,
                             std::optional<int> expected_dim = std::nullopt);

}  // namespace birkhoff::inverse
