#include <cmath>
#include <random>

#include "birkhoff/bnf.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/oracle.hpp"
#include "birkhoff/resonant.hpp"
#include "birkhoff/spectrum.hpp"
#include "doctest.h"

using namespace birkhoff;
using namespace birkhoff::resonant;
using weyl::ComplexSymbol;
using weyl::FormalSymbol;

namespace {

ComplexSymbol zmono(int dim, int trunc, int hbar, std::vector<int> a, std::vector<int> b,
                    const Complex& c) {
  return ComplexSymbol::monomial(dim, trunc, hbar, a, b, c);
}

ComplexSymbol sigma(int dim, int trunc) {
  return weyl::to_complex(weyl::harmonic(dim, trunc, std::vector<Surd>(dim, Surd(1))));
}

ComplexSymbol action_sq(int dim, int trunc, int j) {
  const ComplexSymbol i = weyl::to_complex(weyl::action(dim, trunc, j));
  return weyl::product(i, i);
}

// Random real symbol of degree <= 4 built from monomials with |a| = |b|.
ComplexSymbol random_resonant(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> exp(0, 2);
  ComplexSymbol out(2, trunc);
  for (int t = 0; t < 5; ++t) {
    std::vector<int> a{exp(rng), exp(rng)};
    const int size = a[0] + a[1];
    if (size > 2) continue;
    const int b0 = std::uniform_int_distribution<int>(0, size)(rng);
    const std::vector<int> b{b0, size - b0};
    const Complex c(Surd(Rational(num(rng), 3)), Surd(Rational(num(rng), 5)));
    out += zmono(2, trunc, 0, a, b, c);
    out += zmono(2, trunc, 0, b, a, c.conj());
  }
  return out;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kParseError;
}

}  // namespace

TEST_CASE("kappa calibration") {
  CHECK(calibrate_wick_kappa() == Rational(kWickKappa));
}

TEST_CASE("weyl_to_wick examples") {
  LadderPolynomial l = weyl_to_wick(zmono(1, 4, 0, {1}, {0}, 1));
  REQUIRE(l.terms.size() == 1);
  CHECK(l.terms.at(LadderKey{{0}, {1}}) == HalfHbarSeries{{1, Complex(Surd::sqrt(2))}});

  l = weyl_to_wick(zmono(1, 4, 0, {1}, {1}, Complex(Rational(1, 2))));
  CHECK(l.terms == std::map<LadderKey, HalfHbarSeries>{
                       {LadderKey{{0}, {0}}, {{2, Complex(Rational(1, 2))}}},
                       {LadderKey{{1}, {1}}, {{2, Complex(1)}}}});

  l = weyl_to_wick(zmono(1, 4, 0, {2}, {2}, Complex(Rational(1, 4))));
  CHECK(l.terms == std::map<LadderKey, HalfHbarSeries>{
                       {LadderKey{{0}, {0}}, {{4, Complex(Rational(1, 2))}}},
                       {LadderKey{{1}, {1}}, {{4, Complex(2)}}},
                       {LadderKey{{2}, {2}}, {{4, Complex(1)}}}});
  CHECK(l.is_hermitian());
}

TEST_CASE("weyl_to_wick is multiplicative on blocks") {
  std::mt19937 rng(41);
  const double hbar = 0.3;
  for (int t = 0; t < 8; ++t) {
    const ComplexSymbol f = random_resonant(rng, 8);
    const ComplexSymbol g = random_resonant(rng, 8);
    const FormalSymbol fr = weyl::from_complex(f, weyl::Reality::kAllowComplex);
    const FormalSymbol gr = weyl::from_complex(g, weyl::Reality::kAllowComplex);
    const ComplexSymbol fg = weyl::to_complex(weyl::moyal_star(fr, gr));
    for (int n = 0; n <= 3; ++n) {
      const Eigen::MatrixXcd lhs = fock_matrix(weyl_to_wick(fg), n).evaluate(hbar);
      const Eigen::MatrixXcd rhs = fock_matrix(weyl_to_wick(f), n).evaluate(hbar) *
                                   fock_matrix(weyl_to_wick(g), n).evaluate(hbar);
      CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    }
    CHECK(weyl_to_wick(f).is_hermitian());
  }
}

TEST_CASE("fock_matrix examples") {
  for (int n = 0; n <= 5; ++n) {
    const FockBlock block = fock_matrix(weyl_to_wick(sigma(2, 4)), n);
    REQUIRE(block.states.size() == static_cast<std::size_t>(n + 1));
    for (std::size_t r = 0; r < block.states.size(); ++r) {
      for (std::size_t c = 0; c < block.states.size(); ++c) {
        const HalfHbarSeries expected =
            r == c ? HalfHbarSeries{{2, Complex(n + 1)}} : HalfHbarSeries{};
        CHECK(block.entries[r][c] == expected);
      }
    }
  }

  const FockBlock one = fock_matrix(weyl_to_wick(zmono(1, 4, 0, {1}, {1}, Complex(Rational(1, 2)))), 3);
  CHECK(one.entries[0][0] == HalfHbarSeries{{2, Complex(Rational(7, 2))}});

  const FockBlock i1 = fock_matrix(weyl_to_wick(action_sq(2, 4, 0)), 1);
  REQUIRE(i1.states == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(i1.entries[0][0] == HalfHbarSeries{{4, Complex(Rational(5, 2))}});
  CHECK(i1.entries[1][1] == HalfHbarSeries{{4, Complex(Rational(1, 2))}});
  CHECK(i1.entries[0][1].empty());

  CHECK(code_of([] { fock_matrix(weyl_to_wick(zmono(2, 4, 0, {1, 0}, {0, 0}, 1)), 1); }) ==
        ErrorCode::kNotBlockDiagonal);
}

TEST_CASE("block structure of the full Fock matrix") {
  std::mt19937 rng(8);
  const ComplexSymbol f = random_resonant(rng, 4);
  const LadderPolynomial l = weyl_to_wick(f);
  for (const auto& [key, series] : l.terms) {
    CHECK(std::accumulate(key.beta.begin(), key.beta.end(), 0) ==
          std::accumulate(key.alpha.begin(), key.alpha.end(), 0));
  }
  for (int n = 0; n <= 4; ++n) {
    const Eigen::MatrixXcd m = fock_matrix(l, n).evaluate(0.2);
    CHECK((m - m.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("cluster_spectrum examples") {
  ClusterSpectrum s = cluster_spectrum(sigma(2, 4), 4, 0.1);
  REQUIRE(s.eigenvalues.size() == 5);
  for (double e : s.eigenvalues) CHECK(std::abs(e - 0.5) < 1e-14);
  CHECK(std::abs(s.center - 0.5) < 1e-14);

  const ComplexSymbol b = sigma(2, 4) + action_sq(2, 4, 0);
  s = cluster_spectrum(b, 1, 0.1);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues[0] - 0.205) < 1e-14);
  CHECK(std::abs(s.eigenvalues[1] - 0.225) < 1e-14);

  for (int n = 0; n <= 6; ++n) {
    const ClusterSpectrum c = cluster_spectrum(b, n, 0.05);
    CHECK(c.dimension == n + 1);
    CHECK(c.eigenvalues.size() == static_cast<std::size_t>(n + 1));
  }
  CHECK(cluster_spectrum(sigma(3, 4), 3, 0.1).dimension == 10);

  CHECK(code_of([] { cluster_spectrum(sigma(2, 4) + zmono(2, 4, 0, {2, 0}, {1, 0}, 1), 1, 0.1); }) ==
        ErrorCode::kNotCommuting);
}

TEST_CASE("cluster width scales like hbar^2") {
  const ComplexSymbol coupling = zmono(2, 4, 0, {2, 0}, {0, 2}, Complex(Rational(1, 3))) +
                                 zmono(2, 4, 0, {0, 2}, {2, 0}, Complex(Rational(1, 3)));
  const ComplexSymbol b = sigma(2, 4) + action_sq(2, 4, 0) + coupling;
  for (int n = 1; n <= 4; ++n) {
    std::vector<double> widths;
    for (double hbar : {0.1, 0.05, 0.025}) {
      const ClusterSpectrum s = cluster_spectrum(b, n, hbar);
      widths.push_back(s.eigenvalues.back() - s.eigenvalues.front());
    }
    for (int i = 0; i + 1 < 3; ++i) CHECK(std::abs(widths[i] / widths[i + 1] - 4.0) <= 1.0);
  }
}

TEST_CASE("d = 1 clusters reproduce the eigenvalue expansion") {
  bnf::HamiltonianInput h;
  h.dim = 1;
  h.omegas = {Surd(1)};
  h.taylor = weyl::harmonic(1, 6, h.omegas);
  h.taylor += FormalSymbol::monomial(1, 6, 0, {4}, {0}, Complex(Rational(1, 10)));
  h.taylor += FormalSymbol::monomial(1, 6, 0, {3}, {0}, Complex(Rational(1, 7)));
  const bnf::NormalForm nf = bnf::normalize(h, 6);
  const bnf::BNFData data = bnf::bnf_of_hamiltonian(h, 6);
  for (int n = 0; n <= 5; ++n) {
    const auto a = spectrum::eigenvalue_expansion(data, {n}, 3);
    for (double hbar : {0.1, 0.37}) {
      double expected = 0;
      for (int j = 0; j <= 3; ++j) expected += a[j].to_double() * std::pow(hbar, j);
      const ClusterSpectrum s = cluster_spectrum(nf.symbol, n, hbar);
      REQUIRE(s.eigenvalues.size() == 1);
      CHECK(std::abs(s.eigenvalues[0] - expected) < 1e-13);
    }
  }
}

TEST_CASE("resonant clusters against the 2D eigensolver") {
  const double lambda = 0.1;
  const auto v = oracle::PolynomialPotential::create(
      2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}, {{2, 2}, lambda}});
  bnf::HamiltonianInput h;
  h.dim = 2;
  h.omegas = {Surd(1), Surd(1)};
  h.taylor = weyl::harmonic(2, 4, h.omegas);
  h.taylor += FormalSymbol::monomial(2, 4, 0, {2, 2}, {0, 0}, Complex(Rational(1, 10)));
  const bnf::NormalForm nf = bnf::normalize(h, 4, bnf::Resonance::kKeep);
  const std::vector<double> grid{0.1, 0.05, 0.025};
  for (int n = 0; n <= 2; ++n) {
    const int below = n * (n + 1) / 2;
    std::vector<double> residuals;
    for (double hbar : grid) {
      const auto numeric = oracle::eigenvalues_2d(v, hbar, 16, below + n + 1);
      const ClusterSpectrum s = cluster_spectrum(nf.symbol, n, hbar);
      double worst = 0;
      for (int i = 0; i <= n; ++i) {
        worst = std::max(worst, std::abs(numeric[below + i] - s.eigenvalues[i]));
      }
      residuals.push_back(worst);
    }
    const auto [slope, intercept] = oracle::loglog_fit(grid, residuals);
    CHECK(slope >= 2.7);
  }
}
