#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "birkhoff/oracle.hpp"
#include "birkhoff/reference.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/weyl.hpp"

using namespace birkhoff;

namespace {

double seconds(const std::function<void()>& f, int repeat) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < repeat; ++r) f();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count() / repeat;
}

void report(const std::string& name, double serial, double parallel) {
  std::printf("%-28s serial %10.4f s   parallel %10.4f s   speedup %6.2fx\n", name.c_str(), serial,
              parallel, serial / parallel);
}

weyl::FormalSymbol random_symbol(std::mt19937& rng, int dim, int truncation, int terms) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> slot(0, 2 * dim - 1);
  std::uniform_int_distribution<int> degree(1, truncation / 2);
  weyl::FormalSymbol out(dim, truncation);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> q(dim, 0), p(dim, 0);
    for (int left = degree(rng); left > 0; --left) {
      const int s = slot(rng);
      (s < dim ? q[s] : p[s - dim]) += 1;
    }
    out += weyl::FormalSymbol::monomial(dim, truncation, 0, q, p, Complex(Rational(num(rng), den(rng))));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial reference versus OpenMP kernels"};
  int repeat = 3;
  unsigned seed = 7;
  int terms = 40;
  app.add_option("--repeat", repeat, "Repetitions per measurement");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--terms", terms, "Monomials per random symbol");
  CLI11_PARSE(app, argc, argv);

  const int threads = omp_get_max_threads();
  std::printf("OpenMP threads: %d\n", threads);

  std::mt19937 rng(seed);
  const weyl::FormalSymbol f = random_symbol(rng, 2, 12, terms);
  const weyl::FormalSymbol g = random_symbol(rng, 2, 12, terms);
  report("moyal_star d=2 D=12", seconds([&] { reference::moyal_star(f, g); }, repeat),
         seconds([&] { weyl::moyal_star(f, g); }, repeat));

  const std::vector<double> poly{0, 0, 0.5, 0.1, 0.1, 0, 0.01};
  std::map<std::vector<int>, double> coeffs;
  for (int p = 0; p < static_cast<int>(poly.size()); ++p) coeffs[{p}] = poly[p];
  const auto v1 = oracle::PolynomialPotential::create(1, coeffs);
  report("hamiltonian 1D size=200",
         seconds([&] { reference::hamiltonian_matrix_1d(poly, 0.05, 1.0, 200); }, repeat),
         seconds([&] { oracle::hamiltonian_1d(v1, 0.05, 1.0, 200); }, repeat));

  const auto v2 = oracle::PolynomialPotential::create(
      2, {{{2, 0}, 0.5}, {{0, 2}, 1.0}, {{2, 2}, 0.1}, {{4, 0}, 0.05}});
  auto assemble_2d = [&] { oracle::hamiltonian_2d(v2, 0.05, 40); };
  omp_set_num_threads(1);
  const double serial_2d = seconds(assemble_2d, repeat);
  omp_set_num_threads(threads);
  report("hamiltonian 2D K=40", serial_2d, seconds(assemble_2d, repeat));

  bnf::BNFData data;
  data.dim = 2;
  data.omegas = {Surd(1), Surd::sqrt(2)};
  data.coeffs[bnf::CoeffKey{0, {2, 0}}] = Surd(Rational(3, 20));
  data.coeffs[bnf::CoeffKey{0, {1, 1}}] = Surd(Rational(-1, 7));
  data.coeffs[bnf::CoeffKey{1, {1, 1}}] = Surd(Rational(2, 5));
  data.coeffs[bnf::CoeffKey{0, {0, 4}}] = Surd(Rational(1, 9));
  auto forward = [&] { spectrum::spectrum_forward(data, 400, 4); };
  omp_set_num_threads(1);
  const double serial_forward = seconds(forward, repeat);
  omp_set_num_threads(threads);
  report("spectrum_forward M=400 J=4", serial_forward, seconds(forward, repeat));
  return 0;
}
