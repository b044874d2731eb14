#pragma once

// Birkhoff normalization of a Weyl symbol near a non-degenerate minimum with
// diagonal quadratic part, and conversion of the normal form to the
// coefficients c_{l,alpha} of  E0 + hbar E1 + sum omega_j Omega_j
// + sum_{l+|alpha|>=2} c_{l,alpha} hbar^l Omega^alpha.

#include <compare>
#include <map>
#include <vector>

#include "birkhoff/scalars.hpp"
#include "birkhoff/weyl.hpp"

namespace birkhoff::bnf {

// Index (l, alpha) of hbar^l Omega^alpha, also used for hbar^l I^alpha.
struct CoeffKey {
  int l = 0;
  std::vector<int> alpha;

  int order() const;  // l + |alpha|
  auto operator<=>(const CoeffKey&) const = default;
};

using CoeffMap = std::map<CoeffKey, Surd>;

struct HamiltonianInput {
  int dim = 1;
  std::vector<Surd> omegas;  // 0 < omega_1 < ... < omega_d
  Surd e0;
  Surd e1;
  // Full Weyl symbol at the minimum; its degree-<=2 part must be exactly
  // E0 + hbar E1 + sum omega_j (x_j^2 + xi_j^2) / 2.
  weyl::FormalSymbol taylor;
};

enum class Resonance {
  kForbid,  // every a != b monomial must have a nonzero divisor
  kKeep,    // monomials with <omega, a - b> = 0 stay in the normal form
};

// Throws INVALID_INPUT / DEPENDENT_FREQUENCIES when the invariants fail.
// Independence of the frequencies is only checked under kForbid.
void validate(const HamiltonianInput& h, Resonance resonance = Resonance::kForbid);

struct CohomologicalSplit {
  weyl::ComplexSymbol generator;  // S with {Sigma, S} = K - R
  weyl::ComplexSymbol remainder;  // R, the part of K in the kernel of ad_Sigma
};

// K must be homogeneous of one degree. S gets coeff/(i <omega, a - b>) on
// every a != b monomial and no kernel component.
CohomologicalSplit cohomological_solve(const weyl::ComplexSymbol& k,
                                       const std::vector<Surd>& omegas,
                                       Resonance resonance = Resonance::kForbid);

struct NormalForm {
  weyl::ComplexSymbol symbol;
  // Generators in application order: symbol = conj(g_D, ... conj(g_3, H)).
  std::vector<weyl::FormalSymbol> generators;
};

NormalForm normalize(const HamiltonianInput& h, int truncation,
                     Resonance resonance = Resonance::kForbid);

// Applies the generators in order.
weyl::FormalSymbol replay(const std::vector<weyl::FormalSymbol>& generators,
                          const weyl::FormalSymbol& h);

// hbar^l I^alpha coefficients of a symbol whose (z, zbar) monomials all have
// a = b. Throws NOT_ACTION_POLYNOMIAL otherwise.
CoeffMap action_coefficients(const weyl::ComplexSymbol& k);

// Symbol of I_1^{*alpha_1} * ... * I_d^{*alpha_d} (the Weyl symbol of
// Omega^alpha) as an action polynomial.
CoeffMap star_power(int dim, const std::vector<int>& alpha);

// Unique c with Op(K) = sum c_{l,alpha} hbar^l Omega^alpha.
CoeffMap omega_basis_convert(const weyl::ComplexSymbol& k);

// sum c_{l,alpha} hbar^l I^{*alpha} as an action polynomial.
CoeffMap reexpand(int dim, const CoeffMap& omega_coeffs);

struct BNFData {
  int dim = 1;
  std::vector<Surd> omegas;
  Surd e0;
  Surd e1;
  CoeffMap coeffs;  // keys with l + |alpha| >= 2, no zero values

  friend bool operator==(const BNFData&, const BNFData&) = default;
};

BNFData bnf_of_hamiltonian(const HamiltonianInput& h, int truncation);

}  // namespace birkhoff::bnf
