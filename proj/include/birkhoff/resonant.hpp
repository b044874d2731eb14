#pragma once

// Completely resonant case omega = (1, ..., 1): normal ordering of Weyl
// symbols, matrices on the Sigma-eigenspaces {|k| = N}, and cluster
// eigenvalues.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "birkhoff/scalars.hpp"
#include "birkhoff/weyl.hpp"

namespace birkhoff::resonant {

// Coefficient series sum_e c_e hbar^{e/2}.
using HalfHbarSeries = std::map<int, Complex>;

void add_series(HalfHbarSeries& into, const HalfHbarSeries& term);
std::complex<double> evaluate(const HalfHbarSeries& series, double hbar);

// Normal-ordered monomial (a^dagger)^beta a^alpha.
struct LadderKey {
  std::vector<int> beta;
  std::vector<int> alpha;
  auto operator<=>(const LadderKey&) const = default;
};

struct LadderPolynomial {
  int dim = 1;
  std::map<LadderKey, HalfHbarSeries> terms;

  // True when swapping (beta, alpha) conjugates every coefficient.
  bool is_hermitian() const;
};

// The ordering constant kappa in exp(kappa hbar sum d_z d_zbar).
inline constexpr int kWickKappa = 1;

// kappa for which z zbar / 2 maps to hbar a^dagger a + hbar / 2.
Rational calibrate_wick_kappa();

// exp(kappa hbar sum_j d_{z_j} d_{zbar_j}) followed by z -> sqrt(2 hbar) a,
// zbar -> sqrt(2 hbar) a^dagger in normal order.
LadderPolynomial weyl_to_wick(const weyl::ComplexSymbol& c, const Rational& kappa = kWickKappa);

// All k in Z>=0^dim with |k| = n, lexicographically decreasing.
std::vector<std::vector<int>> shell_states(int dim, int n);

struct FockBlock {
  std::vector<std::vector<int>> states;
  std::vector<std::vector<HalfHbarSeries>> entries;  // <states[r]| L |states[c]>

  Eigen::MatrixXcd evaluate(double hbar) const;
};

// Throws NOT_BLOCK_DIAGONAL when some term has |beta| != |alpha|.
FockBlock fock_matrix(const LadderPolynomial& l, int n);

struct ClusterSpectrum {
  int n = 0;
  double hbar = 0;
  int dimension = 0;  // binom(n + d - 1, d - 1)
  double center = 0;  // hbar (n + d/2 + P_{0,1})
  std::vector<double> eigenvalues;  // ascending
};

// B must Poisson-commute with Sigma = sum (x_j^2 + xi_j^2)/2, otherwise
// NOT_COMMUTING.
ClusterSpectrum cluster_spectrum(const weyl::ComplexSymbol& b, int n, double hbar);

// The exact block of B on {|k| = n}.
FockBlock cluster_block(const weyl::ComplexSymbol& b, int n);

}  // namespace birkhoff::resonant
