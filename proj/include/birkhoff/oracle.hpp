#pragma once

// Numerical Schroedinger eigenvalues of -hbar^2/2 Laplacian + V(x) in a
// Hermite (oscillator) basis, and hbar scans of the residual against the
// eigenvalue expansion predicted by a BNF.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "birkhoff/bnf.hpp"

namespace birkhoff::oracle {

class PolynomialPotential {
 public:
  // Throws INVALID_INPUT for dim outside {1, 2} or when V is not confining
  // (leading behaviour not positive along some sampled direction).
  static PolynomialPotential create(int dim, std::map<std::vector<int>, double> coeffs);

  int dim() const { return dim_; }
  const std::map<std::vector<int>, double>& coeffs() const { return coeffs_; }
  int degree() const;
  double operator()(const std::vector<double>& x) const;
  // omega_j = sqrt(2 c_j) for the x_j^2 coefficient c_j, or 1 when c_j <= 0.
  std::vector<double> mode_frequencies() const;

 private:
  int dim_ = 1;
  std::map<std::vector<int>, double> coeffs_;
};

struct ConvergenceOptions {
  double relative_tolerance = 1e-10;
};

// Dense Hamiltonian 1/2 p^2 + V(x) on the first `size` oscillator states
// with frequency omega.
Eigen::MatrixXd hamiltonian_1d(const PolynomialPotential& v, double hbar, double omega, int size);

// Hamiltonian on {|k1, k2> : k1 + k2 <= truncation}, rows assembled in
// parallel. `states` receives the basis order.
Eigen::MatrixXd hamiltonian_2d(const PolynomialPotential& v, double hbar, int truncation,
                               std::vector<std::pair<int, int>>* states = nullptr);

// Lowest `count` eigenvalues, checked against a doubled basis. Throws
// NOT_CONVERGED when some level moves by more than the tolerance.
std::vector<double> eigenvalues_1d(const PolynomialPotential& v, double hbar, int basis_size,
                                   int count, const ConvergenceOptions& options = {});
std::vector<double> eigenvalues_2d(const PolynomialPotential& v, double hbar, int truncation,
                                   int count, const ConvergenceOptions& options = {});

enum class ScanStatus { kPass, kFail, kNoiseFloor };
std::string to_string(ScanStatus status);

struct ScanReport {
  std::vector<int> k;
  int level = 0;  // psi rank N
  int order = 0;  // J
  std::vector<double> hbar;
  std::vector<double> numeric;
  std::vector<double> predicted;
  std::vector<double> residuals;
  double slope = 0;
  double intercept = 0;
  ScanStatus status = ScanStatus::kFail;

  bool passed() const { return status != ScanStatus::kFail; }
};

struct ScanOptions {
  int basis_size = 64;  // 1D basis size or 2D total-degree truncation
  double noise_floor = 1e-11;
  ConvergenceOptions convergence;
};

// Residuals between the numeric level of rank psi(k) and the order-J
// truncation of the expansion, with a least-squares log-log slope. Passes
// when slope >= J + 0.7 or every residual is below the noise floor.
ScanReport hbar_scan(const PolynomialPotential& v, const bnf::BNFData& prediction,
                     const std::vector<int>& k, int order, const std::vector<double>& hbar_grid,
                     const ScanOptions& options = {});

// Least-squares fit of log(residual) against log(hbar): {slope, intercept}.
std::pair<double, double> loglog_fit(const std::vector<double>& hbar,
                                     const std::vector<double>& residuals);

}  // namespace birkhoff::oracle
