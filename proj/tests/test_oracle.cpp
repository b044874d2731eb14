#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "birkhoff/error.hpp"
#include "birkhoff/oracle.hpp"
#include "birkhoff/reference.hpp"
#include "birkhoff/spectrum.hpp"
#include "doctest.h"

using namespace birkhoff;
using namespace birkhoff::oracle;

namespace {

PolynomialPotential quartic_1d(double lambda) {
  return PolynomialPotential::create(1, {{{2}, 0.5}, {{4}, lambda}});
}

bnf::BNFData quartic_bnf(const Rational& lambda, int truncation) {
  bnf::HamiltonianInput h;
  h.dim = 1;
  h.omegas = {Surd(1)};
  h.taylor = weyl::harmonic(1, truncation, h.omegas);
  h.taylor += weyl::FormalSymbol::monomial(1, truncation, 0, {4}, {0}, Complex(lambda));
  return bnf::bnf_of_hamiltonian(h, truncation);
}

std::vector<double> all_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("harmonic 1D spectrum is exact") {
  const auto v = PolynomialPotential::create(1, {{{2}, 0.5}});
  const auto e = eigenvalues_1d(v, 0.1, 32, 8);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(e[k] - 0.1 * (k + 0.5)) < 1e-12);

  const auto stiff = PolynomialPotential::create(1, {{{2}, 2.0}});
  const auto f = eigenvalues_1d(stiff, 0.05, 64, 16);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(f[k] - 0.05 * 2.0 * (k + 0.5)) < 1e-12 * f[k]);
}

TEST_CASE("quartic ground state against the expansion") {
  const auto e = eigenvalues_1d(quartic_1d(0.1), 0.1, 48, 1);
  CHECK(std::abs(e[0] - 0.05075) < 1e-4);
  const auto a = spectrum::eigenvalue_expansion(quartic_bnf(Rational(1, 10), 4), {0}, 2);
  const double predicted = a[1].to_double() * 0.1 + a[2].to_double() * 0.01;
  CHECK(predicted == doctest::Approx(0.05075).epsilon(1e-12));
  CHECK(std::abs(e[0] - predicted) < 1e-4);
}

TEST_CASE("confinement check") {
  CHECK_THROWS_AS(PolynomialPotential::create(1, {{{4}, -1.0}}), Error);
  CHECK_THROWS_AS(PolynomialPotential::create(1, {{{3}, 1.0}, {{2}, 0.5}}), Error);
  CHECK_THROWS_AS(PolynomialPotential::create(2, {{{2, 0}, 0.5}}), Error);
  CHECK_NOTHROW(PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}, {{2, 2}, 0.1}}));
  CHECK_THROWS_AS(PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}, {{2, 2}, -0.1}}),
                  Error);
}

TEST_CASE("1D assembly matches the serial reference") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const std::vector<double> poly{coef(rng), coef(rng), 0.5 + std::abs(coef(rng)), coef(rng),
                                   0.2 + std::abs(coef(rng)), coef(rng), 0.1};
    std::map<std::vector<int>, double> coeffs;
    for (int p = 0; p < static_cast<int>(poly.size()); ++p) coeffs[{p}] = poly[p];
    const auto v = PolynomialPotential::create(1, coeffs);
    const double omega = v.mode_frequencies()[0];
    const int size = 30;
    const Eigen::MatrixXd fast = hamiltonian_1d(v, 0.07, omega, size);
    const std::vector<double> ref = reference::hamiltonian_matrix_1d(poly, 0.07, omega, size);
    double worst = 0;
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        worst = std::max(worst, std::abs(fast(r, c) - ref[static_cast<std::size_t>(r) * size + c]));
      }
    }
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("variational monotonicity") {
  const auto v = quartic_1d(0.3);
  const double omega = v.mode_frequencies()[0];
  std::vector<double> previous;
  for (int size : {16, 24, 32, 48}) {
    const auto e = all_eigenvalues(hamiltonian_1d(v, 0.2, omega, size));
    if (!previous.empty()) {
      for (int k = 0; k < 8; ++k) CHECK(e[k] <= previous[k] + 1e-12);
    }
    previous = e;
  }
}

TEST_CASE("NOT_CONVERGED on a basis that is too small") {
  try {
    eigenvalues_1d(quartic_1d(5.0), 0.5, 16, 12);
    FAIL("expected NOT_CONVERGED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
  }
}

TEST_CASE("2D resonant oscillator clusters") {
  const auto v = PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}});
  const auto e = eigenvalues_2d(v, 0.1, 12, 21);
  int idx = 0;
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= n; ++m) CHECK(std::abs(e[idx++] - 0.1 * (n + 1)) < 1e-12);
  }
}

TEST_CASE("2D separable non-resonant oscillator") {
  const auto v = PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 1.0}});
  const double s2 = std::sqrt(2.0);
  std::vector<double> expected;
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) expected.push_back(0.1 * (a + 0.5) + s2 * 0.1 * (b + 0.5));
  }
  std::sort(expected.begin(), expected.end());
  const auto e = eigenvalues_2d(v, 0.1, 12, 20);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(e[i] - expected[i]) < 1e-12);
}

TEST_CASE("2D coupled potential against the BNF expansion") {
  // (p^2 + x1^2)/2 + (p2^2 + 2 x2^2)/2 + lambda x1^2 x2^2 becomes, after
  // x2 -> x2 / 2^{1/4}, the symbol sum omega_j (x_j^2 + xi_j^2)/2 +
  // (lambda / sqrt 2) x1^2 x2^2 with omega = (1, sqrt 2).
  const Rational lambda(1, 10);
  const auto v = PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 1.0}, {{2, 2}, 0.1}});
  bnf::HamiltonianInput h;
  h.dim = 2;
  h.omegas = {Surd(1), Surd::sqrt(2)};
  h.taylor = weyl::harmonic(2, 4, h.omegas);
  h.taylor += weyl::FormalSymbol::monomial(2, 4, 0, {2, 2}, {0, 0},
                                           Complex(Surd::sqrt(2) * (lambda / 2)));
  const bnf::BNFData prediction = bnf::bnf_of_hamiltonian(h, 4);
  ScanOptions options;
  options.basis_size = 16;
  for (const std::vector<int>& k : {std::vector<int>{0, 0}, {1, 0}, {0, 1}}) {
    const ScanReport r = hbar_scan(v, prediction, k, 2, {0.1, 0.05, 0.025}, options);
    CHECK(r.status == ScanStatus::kPass);
    CHECK(r.slope >= 2.7);
  }
}

TEST_CASE("hbar_scan harmonic hits the noise floor") {
  bnf::BNFData pure;
  pure.dim = 1;
  pure.omegas = {Surd(1)};
  const auto v = PolynomialPotential::create(1, {{{2}, 0.5}});
  const ScanReport r = hbar_scan(v, pure, {3}, 2, {0.2, 0.1, 0.05});
  CHECK(r.status == ScanStatus::kNoiseFloor);
  CHECK(r.passed());
}

TEST_CASE("hbar_scan quartic slopes") {
  const auto v = quartic_1d(0.1);
  const bnf::BNFData d4 = quartic_bnf(Rational(1, 10), 4);
  const bnf::BNFData d6 = quartic_bnf(Rational(1, 10), 6);
  for (int k = 0; k <= 4; ++k) {
    const ScanReport r2 = hbar_scan(v, d4, {k}, 2, {0.2, 0.1, 0.05});
    CHECK(r2.level == k + 1);
    CHECK(std::abs(r2.slope - 3.0) <= 0.3);
    const ScanReport r3 = hbar_scan(v, d6, {k}, 3, {0.2, 0.1, 0.05});
    CHECK(std::abs(r3.slope - 4.0) <= 0.4);
  }
}

TEST_CASE("loglog_fit recovers a power law") {
  const auto [slope, intercept] = loglog_fit({0.4, 0.2, 0.1}, {7 * std::pow(0.4, 3),
                                                               7 * std::pow(0.2, 3),
                                                               7 * std::pow(0.1, 3)});
  CHECK(slope == doctest::Approx(3.0));
  CHECK(intercept == doctest::Approx(std::log(7.0)));
}
