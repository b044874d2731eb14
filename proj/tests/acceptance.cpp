#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "birkhoff/bnf.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/inverse.hpp"
#include "birkhoff/oracle.hpp"
#include "birkhoff/resonant.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/weyl.hpp"
#include "random_symbols.hpp"

using namespace birkhoff;
using weyl::ComplexSymbol;
using weyl::FormalSymbol;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

int failures = 0;

void run(int id, const std::string& title, double limit_seconds,
         const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (limit_seconds > 0) {
    o.require(elapsed.count() < limit_seconds,
              "runtime " + std::to_string(elapsed.count()) + " s over the limit");
  }
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              elapsed.count(), o.pass ? "" : " ", o.pass ? "" : o.detail.str().c_str());
  if (!o.pass) ++failures;
}

std::vector<ExactReal> mu_of(const spectrum::SpectralDataset& ds) {
  std::vector<ExactReal> mu;
  for (const auto& level : ds.levels) mu.push_back(level[1]);
  return mu;
}

ComplexSymbol sigma(int dim, int trunc) {
  return weyl::to_complex(weyl::harmonic(dim, trunc, std::vector<Surd>(dim, Surd(1))));
}

// Exact sort of every <omega|k> with k in {0..side-1}^2.
std::vector<std::pair<Surd, std::vector<int>>> box_values(const std::vector<Surd>& omegas, int side) {
  std::vector<std::pair<Surd, std::vector<int>>> out;
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      out.emplace_back(omegas[0] * Rational(a) + omegas[1] * Rational(b), std::vector<int>{a, b});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return compare(x.first, y.first) == Ordering::kLess;
  });
  return out;
}

bnf::BNFData quartic(int truncation) {
  bnf::HamiltonianInput h;
  h.dim = 1;
  h.omegas = {Surd(1)};
  h.taylor = weyl::harmonic(1, truncation, h.omegas);
  h.taylor += FormalSymbol::monomial(1, truncation, 0, {4}, {0}, Complex(Rational(1, 10)));
  return bnf::bnf_of_hamiltonian(h, truncation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  unsigned seed = 2024;
  app.add_option("--seed", seed, "Seed for the randomized criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Surd> w2{Surd(1), Surd::sqrt(2)};

  run(1, "round-trip exactness on 20 random BNFs", 10.0, [&](Outcome& o) {
    std::mt19937 rng(seed);
    for (int t = 0; t < 20; ++t) {
      const bnf::BNFData b = testing::random_bnf(rng, w2, 4);
      spectrum::SpectralDataset ds = spectrum::spectrum_forward(b, 60, 4);
      ds.dim.reset();
      const bnf::BNFData back = inverse::invert_spectrum(ds);
      o.require(back == b, "instance " + std::to_string(t) + " differs");
    }
  });

  run(2, "quartic oscillator end-to-end", 60.0, [&](Outcome& o) {
    const bnf::BNFData d4 = quartic(4);
    o.require(d4.coeffs.size() == 2, "D=4 should give two coefficients");
    o.require(d4.coeffs.at(bnf::CoeffKey{0, {2}}) == Surd(Rational(3, 20)), "c_{0,(2)} != 3/20");
    o.require(d4.coeffs.at(bnf::CoeffKey{2, {0}}) == Surd(Rational(3, 80)), "c_{2,(0)} != 3/80");
    const bnf::BNFData d6 = quartic(6);
    const auto v = oracle::PolynomialPotential::create(1, {{{2}, 0.5}, {{4}, 0.1}});
    const std::vector<double> grid{0.2, 0.1, 0.05};
    for (int k = 0; k <= 4; ++k) {
      const oracle::ScanReport r2 = oracle::hbar_scan(v, d4, {k}, 2, grid);
      o.require(std::abs(r2.slope - 3.0) <= 0.3, "J=2 slope " + std::to_string(r2.slope));
      const oracle::ScanReport r3 = oracle::hbar_scan(v, d6, {k}, 3, grid);
      o.require(std::abs(r3.slope - 4.0) <= 0.4, "J=3 slope " + std::to_string(r3.slope));
    }
  });

  run(3, "sieve recovers (1, sqrt 2, sqrt 3) from 300 levels", 5.0, [&](Outcome& o) {
    const std::vector<Surd> w3{Surd(1), Surd::sqrt(2), Surd::sqrt(3)};
    const bnf::BNFData b = testing::oscillator(w3, Surd(), Surd(Rational(1, 3)));
    const inverse::SieveResult r = inverse::sieve_omegas(mu_of(spectrum::spectrum_forward(b, 300, 1)));
    o.require(r.dim == 3, "dim " + std::to_string(r.dim));
    for (int j = 0; j < std::min(r.dim, 3); ++j) {
      o.require(to_surd(r.omegas[j]) == w3[j], "omega_" + std::to_string(j + 1));
    }
  });

  run(4, "partition identity for omega = (1, sqrt 2)", 0, [&](Outcome& o) {
    const bnf::BNFData b = testing::oscillator(w2, Surd(), Surd(Rational(1, 3)));
    const std::vector<ExactReal> mu = mu_of(spectrum::spectrum_forward(b, 100, 1));
    const auto box = box_values(w2, 20);
    for (int n = 0; n < 100; ++n) {
      const Surd nu = to_surd(mu[n]) - to_surd(mu[0]);
      if (!(nu == box[n].first)) {
        o.require(false, "nu_" + std::to_string(n + 1) + " differs from the enumeration");
        break;
      }
    }
    const spectrum::PartitionReport r = spectrum::partition_identity_check(mu, w2, {0.5, 1.0, 2.0});
    o.require(r.multiset_equal, "multiset check");
    for (const auto& s : r.samples) {
      o.require(s.within_bound, "z = " + std::to_string(s.z) + " outside the tail bound");
    }
  });

  run(5, "psi against box-and-sort and the d = 1 ladder", 0, [&](Outcome& o) {
    const spectrum::PsiTable t = spectrum::psi_enumerate(w2, 10);
    const auto box = box_values(w2, 12);
    for (int i = 0; i < 10; ++i) {
      o.require(t.entries[i].k == box[i].second && t.entries[i].value == box[i].first,
                "entry " + std::to_string(i + 1));
    }
    const spectrum::PsiTable ladder = spectrum::psi_enumerate({Surd(1)}, 100);
    for (int n = 1; n <= 100; ++n) {
      o.require(ladder.entries[n - 1].k == std::vector<int>{n - 1}, "psi(" + std::to_string(n) + ")");
    }
  });

  run(6, "Moyal star associativity and canonical relations", 0, [&](Outcome& o) {
    std::mt19937 rng(seed + 6);
    for (int t = 0; t < 100; ++t) {
      const int dim = 1 + t % 2;
      const FormalSymbol f = testing::random_symbol(rng, dim, 10, 4, 0, 5);
      const FormalSymbol g = testing::random_symbol(rng, dim, 10, 4, 0, 5);
      const FormalSymbol h = testing::random_symbol(rng, dim, 10, 4, 0, 5);
      if (!(weyl::moyal_star(weyl::moyal_star(f, g), h) == weyl::moyal_star(f, weyl::moyal_star(g, h)))) {
        o.require(false, "triple " + std::to_string(t));
      }
    }
    const FormalSymbol x = FormalSymbol::monomial(1, 4, 0, {1}, {0}, 1);
    const FormalSymbol xi = FormalSymbol::monomial(1, 4, 0, {0}, {1}, 1);
    o.require(weyl::moyal_star(x, xi) - weyl::moyal_star(xi, x) ==
                  FormalSymbol::monomial(1, 4, 1, {0}, {0}, Complex::i()),
              "x * xi - xi * x != i hbar");
    const FormalSymbol i = weyl::action(1, 4, 0);
    o.require(weyl::moyal_star(i, i) ==
                  weyl::product(i, i) - FormalSymbol::monomial(1, 4, 2, {0}, {0}, Complex(Rational(1, 4))),
              "I * I != I^2 - hbar^2 / 4");
  });

  run(7, "normal form commutes with Sigma and replays exactly", 0, [&](Outcome& o) {
    std::mt19937 rng(seed + 7);
    for (int t = 0; t < 10; ++t) {
      const int dim = 1 + t % 2;
      const int trunc = 4 + 2 * (t % 3);
      const bnf::HamiltonianInput h = testing::random_hamiltonian(rng, dim, trunc, 6);
      const bnf::NormalForm nf = bnf::normalize(h, trunc);
      const ComplexSymbol s = weyl::to_complex(weyl::harmonic(dim, trunc, h.omegas));
      const ComplexSymbol bracket = weyl::poisson(s, nf.symbol);
      for (int g = 0; g <= trunc; ++g) {
        o.require(weyl::grade_component(bracket, g).is_zero(),
                  "input " + std::to_string(t) + " grade " + std::to_string(g));
      }
      o.require(weyl::to_complex(bnf::replay(nf.generators, h.taylor)) == nf.symbol,
                "input " + std::to_string(t) + " replay");
    }
  });

  run(8, "resonant clusters", 0, [&](Outcome& o) {
    const ComplexSymbol i1 = weyl::to_complex(weyl::action(2, 4, 0));
    const ComplexSymbol b = sigma(2, 4) + weyl::product(i1, i1);
    const double hbar = 0.1;
    const resonant::ClusterSpectrum s = resonant::cluster_spectrum(b, 1, hbar);
    o.require(s.eigenvalues.size() == 2, "N=1 cluster size");
    if (s.eigenvalues.size() == 2) {
      o.require(std::abs(s.eigenvalues[0] - (2 * hbar + hbar * hbar / 2)) < 1e-14, "lower eigenvalue");
      o.require(std::abs(s.eigenvalues[1] - (2 * hbar + 2.5 * hbar * hbar)) < 1e-14, "upper eigenvalue");
    }
    for (int n = 0; n <= 6; ++n) {
      o.require(resonant::cluster_spectrum(b, n, 0.05).eigenvalues.size() == static_cast<std::size_t>(n + 1),
                "cluster size at N=" + std::to_string(n));
    }
    const std::vector<double> grid{0.1, 0.05, 0.025};
    for (int n = 1; n <= 6; ++n) {
      std::vector<double> widths;
      for (double h : grid) {
        const auto e = resonant::cluster_spectrum(b, n, h).eigenvalues;
        widths.push_back(e.back() - e.front());
      }
      for (int j = 0; j + 1 < 3; ++j) {
        o.require(std::abs(widths[j] / widths[j + 1] - 4.0) <= 1.0,
                  "width ratio at N=" + std::to_string(n));
      }
    }

    const auto v = oracle::PolynomialPotential::create(2, {{{2, 0}, 0.5}, {{0, 2}, 0.5}, {{2, 2}, 0.1}});
    bnf::HamiltonianInput h;
    h.dim = 2;
    h.omegas = {Surd(1), Surd(1)};
    h.taylor = weyl::harmonic(2, 4, h.omegas);
    h.taylor += FormalSymbol::monomial(2, 4, 0, {2, 2}, {0, 0}, Complex(Rational(1, 10)));
    const bnf::NormalForm nf = bnf::normalize(h, 4, bnf::Resonance::kKeep);
    for (int n = 0; n <= 2; ++n) {
      const int below = n * (n + 1) / 2;
      std::vector<double> residuals;
      for (double hb : grid) {
        const auto numeric = oracle::eigenvalues_2d(v, hb, 16, below + n + 1);
        const auto cluster = resonant::cluster_spectrum(nf.symbol, n, hb).eigenvalues;
        double worst = 0;
        for (int i = 0; i <= n; ++i) worst = std::max(worst, std::abs(numeric[below + i] - cluster[i]));
        residuals.push_back(worst);
      }
      const double slope = oracle::loglog_fit(grid, residuals).first;
      o.require(slope >= 2.7, "N=" + std::to_string(n) + " slope " + std::to_string(slope));
    }
  });

  return failures == 0 ? 0 : 1;
}
