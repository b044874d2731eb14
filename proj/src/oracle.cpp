#include "birkhoff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "birkhoff/error.hpp"
#include "birkhoff/spectrum.hpp"

namespace birkhoff::oracle {

namespace {

// Padded ladder combination a + sign * a^dagger.
Eigen::MatrixXd ladder(int size, double sign) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
  for (int n = 1; n < size; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    out(n - 1, n) = s;         // a
    out(n, n - 1) = sign * s;  // a^dagger
  }
  return out;
}

// X^p for p = 0..max_power with X = sqrt(hbar / (2 omega)) (a + a^dagger).
std::vector<Eigen::MatrixXd> position_powers(double hbar, double omega, int size, int max_power) {
  const Eigen::MatrixXd x = std::sqrt(hbar / (2.0 * omega)) * ladder(size, 1.0);
  std::vector<Eigen::MatrixXd> out{Eigen::MatrixXd::Identity(size, size)};
  for (int p = 1; p <= max_power; ++p) out.push_back(out.back() * x);
  return out;
}

// 1/2 p^2 = -(hbar omega / 4) (a^dagger - a)^2
Eigen::MatrixXd kinetic(double hbar, double omega, int size) {
  const Eigen::MatrixXd k = ladder(size, -1.0);
  return (-hbar * omega / 4.0) * (k * k);
}

std::vector<double> lowest(const Eigen::MatrixXd& h, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotConverged, "symmetric eigensolver failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  return std::vector<double>(values.data(), values.data() + count);
}

void check_converged(const std::vector<double>& coarse, const std::vector<double>& fine,
                     double hbar, const ConvergenceOptions& options) {
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double scale = std::max(std::abs(fine[i]), hbar);
    if (std::abs(fine[i] - coarse[i]) > options.relative_tolerance * scale) {
      throw Error(ErrorCode::kNotConverged,
                  "level " + std::to_string(i + 1) + " moved from " + std::to_string(coarse[i]) +
                      " to " + std::to_string(fine[i]) + " when the basis was doubled");
    }
  }
}

}  // namespace

PolynomialPotential PolynomialPotential::create(int dim, std::map<std::vector<int>, double> coeffs) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::kInvalidInput, "potentials need dim 1 or 2");
  PolynomialPotential v;
  v.dim_ = dim;
  for (auto& [alpha, c] : coeffs) {
    if (static_cast<int>(alpha.size()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "potential exponent has the wrong length");
    }
    if (std::any_of(alpha.begin(), alpha.end(), [](int e) { return e < 0; })) {
      throw Error(ErrorCode::kInvalidInput, "negative exponent in potential");
    }
    if (c != 0.0) v.coeffs_.emplace(alpha, c);
  }

  const int directions = dim == 1 ? 2 : 72;
  const int deg = v.degree();
  for (int s = 0; s < directions; ++s) {
    std::vector<double> u;
    if (dim == 1) {
      u = {s == 0 ? 1.0 : -1.0};
    } else {
      const double angle = 2.0 * std::numbers::pi * s / directions;
      u = {std::cos(angle), std::sin(angle)};
    }
    std::vector<double> radial(deg + 1, 0.0);
    for (const auto& [alpha, c] : v.coeffs_) {
      double term = c;
      for (int j = 0; j < dim; ++j) term *= std::pow(u[j], alpha[j]);
      radial[std::accumulate(alpha.begin(), alpha.end(), 0)] += term;
    }
    int lead = deg;
    while (lead > 0 && std::abs(radial[lead]) < 1e-12) --lead;
    if (lead < 2 || radial[lead] <= 0) {
      throw Error(ErrorCode::kInvalidInput, "potential is not confining along a sampled direction");
    }
  }
  return v;
}

int PolynomialPotential::degree() const {
  int out = 0;
  for (const auto& [alpha, c] : coeffs_) {
    out = std::max(out, std::accumulate(alpha.begin(), alpha.end(), 0));
  }
  return out;
}

double PolynomialPotential::operator()(const std::vector<double>& x) const {
  double out = 0;
  for (const auto& [alpha, c] : coeffs_) {
    double term = c;
    for (int j = 0; j < dim_; ++j) term *= std::pow(x[j], alpha[j]);
    out += term;
  }
  return out;
}

std::vector<double> PolynomialPotential::mode_frequencies() const {
  std::vector<double> out(dim_, 1.0);
  for (int j = 0; j < dim_; ++j) {
    std::vector<int> key(dim_, 0);
    key[j] = 2;
    const auto it = coeffs_.find(key);
    if (it != coeffs_.end() && it->second > 0) out[j] = std::sqrt(2.0 * it->second);
  }
  return out;
}

Eigen::MatrixXd hamiltonian_1d(const PolynomialPotential& v, double hbar, double omega, int size) {
  if (v.dim() != 1) throw Error(ErrorCode::kDimensionMismatch, "1D Hamiltonian needs dim 1");
  const int deg = std::max(v.degree(), 2);
  const int padded = size + deg + 2;
  const auto powers = position_powers(hbar, omega, padded, deg);
  Eigen::MatrixXd h = kinetic(hbar, omega, padded);
  for (const auto& [alpha, c] : v.coeffs()) h += c * powers[alpha[0]];
  Eigen::MatrixXd block = h.topLeftCorner(size, size);
  return 0.5 * (block + block.transpose());
}

Eigen::MatrixXd hamiltonian_2d(const PolynomialPotential& v, double hbar, int truncation,
                               std::vector<std::pair<int, int>>* states) {
  if (v.dim() != 2) throw Error(ErrorCode::kDimensionMismatch, "2D Hamiltonian needs dim 2");
  const int deg = std::max(v.degree(), 2);
  const int padded = truncation + deg + 2;
  const std::vector<double> omegas = v.mode_frequencies();
  const auto x1 = position_powers(hbar, omegas[0], padded, deg);
  const auto x2 = position_powers(hbar, omegas[1], padded, deg);
  const Eigen::MatrixXd t1 = kinetic(hbar, omegas[0], padded);
  const Eigen::MatrixXd t2 = kinetic(hbar, omegas[1], padded);

  std::vector<std::pair<int, int>> basis;
  for (int total = 0; total <= truncation; ++total) {
    for (int k1 = total; k1 >= 0; --k1) basis.emplace_back(k1, total - k1);
  }
  const int n = static_cast<int>(basis.size());
  const std::vector<std::pair<std::vector<int>, double>> terms(v.coeffs().begin(),
                                                               v.coeffs().end());
  Eigen::MatrixXd h(n, n);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n; ++r) {
    const auto [m1, m2] = basis[r];
    for (int c = 0; c < n; ++c) {
      const auto [n1, n2] = basis[c];
      double value = 0;
      if (m2 == n2) value += t1(m1, n1);
      if (m1 == n1) value += t2(m2, n2);
      for (const auto& [alpha, coeff] : terms) {
        value += coeff * x1[alpha[0]](m1, n1) * x2[alpha[1]](m2, n2);
      }
      h(r, c) = value;
    }
  }
  if (states) *states = std::move(basis);
  return 0.5 * (h + h.transpose());
}

std::vector<double> eigenvalues_1d(const PolynomialPotential& v, double hbar, int basis_size,
                                   int count, const ConvergenceOptions& options) {
  if (basis_size < 16) throw Error(ErrorCode::kInvalidInput, "basis size must be at least 16");
  if (count < 1 || count > basis_size) throw Error(ErrorCode::kInvalidInput, "bad level count");
  const double omega = v.mode_frequencies()[0];
  const auto coarse = lowest(hamiltonian_1d(v, hbar, omega, basis_size), count);
  const auto fine = lowest(hamiltonian_1d(v, hbar, omega, 2 * basis_size), count);
  check_converged(coarse, fine, hbar, options);
  return fine;
}

std::vector<double> eigenvalues_2d(const PolynomialPotential& v, double hbar, int truncation,
                                   int count, const ConvergenceOptions& options) {
  const int size = (truncation + 1) * (truncation + 2) / 2;
  if (truncation < 4) throw Error(ErrorCode::kInvalidInput, "truncation must be at least 4");
  if (count < 1 || count > size) throw Error(ErrorCode::kInvalidInput, "bad level count");
  const auto coarse = lowest(hamiltonian_2d(v, hbar, truncation), count);
  const auto fine = lowest(hamiltonian_2d(v, hbar, 2 * truncation), count);
  check_converged(coarse, fine, hbar, options);
  return fine;
}

std::string to_string(ScanStatus status) {
  switch (status) {
    case ScanStatus::kPass: return "PASS";
    case ScanStatus::kNoiseFloor: return "NOISE_FLOOR";
    default: return "FAIL";
  }
}

std::pair<double, double> loglog_fit(const std::vector<double>& hbar,
                                     const std::vector<double>& residuals) {
  const std::size_t n = hbar.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(hbar[i]);
    const double y = std::log(std::max(residuals[i], std::numeric_limits<double>::min()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

ScanReport hbar_scan(const PolynomialPotential& v, const bnf::BNFData& prediction,
                     const std::vector<int>& k, int order, const std::vector<double>& hbar_grid,
                     const ScanOptions& options) {
  if (prediction.dim != v.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and potential dimensions differ");
  }
  if (hbar_grid.size() < 3) throw Error(ErrorCode::kInvalidInput, "scan needs >= 3 hbar values");
  for (std::size_t i = 0; i < hbar_grid.size(); ++i) {
    if (!(hbar_grid[i] > 0) || (i > 0 && !(hbar_grid[i] < hbar_grid[i - 1]))) {
      throw Error(ErrorCode::kInvalidInput, "hbar grid must be positive and decreasing");
    }
  }

  ScanReport report;
  report.k = k;
  report.order = order;
  int m = 16;
  while (true) {
    const auto psi = spectrum::psi_enumerate(prediction.omegas, m);
    if (const auto n = psi.level_of(k)) {
      report.level = *n;
      break;
    }
    m *= 2;
  }

  const std::vector<Surd> coeffs = spectrum::eigenvalue_expansion(prediction, k, order);
  bool all_below_floor = true;
  for (double hbar : hbar_grid) {
    const std::vector<double> levels =
        v.dim() == 1
            ? eigenvalues_1d(v, hbar, options.basis_size, report.level, options.convergence)
            : eigenvalues_2d(v, hbar, options.basis_size, report.level, options.convergence);
    const double numeric = levels[report.level - 1];
    double predicted = 0;
    double power = 1;
    for (const auto& a : coeffs) {
      predicted += a.to_double() * power;
      power *= hbar;
    }
    const double residual = std::abs(numeric - predicted);
    if (residual > options.noise_floor * std::max(1.0, std::abs(numeric))) all_below_floor = false;
    report.hbar.push_back(hbar);
    report.numeric.push_back(numeric);
    report.predicted.push_back(predicted);
    report.residuals.push_back(residual);
  }
  if (all_below_floor) {
    report.status = ScanStatus::kNoiseFloor;
    return report;
  }
  std::tie(report.slope, report.intercept) = loglog_fit(report.hbar, report.residuals);
  report.status = report.slope >= order + 0.7 ? ScanStatus::kPass : ScanStatus::kFail;
  return report;
}

}  // namespace birkhoff::oracle
