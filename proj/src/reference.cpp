#include "birkhoff/reference.hpp"

#include <array>
#include <cmath>
#include <map>

namespace birkhoff::reference {

using weyl::Chart;
using weyl::FormalSymbol;
using weyl::Monomial;

namespace {

using DerivIndex = std::array<int, 2 * weyl::kMaxDim>;

FormalSymbol apply_derivatives(const FormalSymbol& f, const DerivIndex& index) {
  FormalSymbol out = f;
  for (int s = 0; s < 2 * f.dim(); ++s) {
    for (int k = 0; k < index[s]; ++k) out = weyl::derivative(out, 1 + s);
  }
  return out;
}

FormalSymbol times_hbar(const FormalSymbol& f, int power) {
  FormalSymbol out(f.dim(), f.truncation());
  for (const auto& [m, c] : f.terms()) {
    Monomial shifted = m;
    shifted.set(0, m.hbar() + power);
    out.add(shifted, c);
  }
  return out;
}

int max_phase_degree(const FormalSymbol& f) {
  int d = 0;
  for (const auto& [m, c] : f.terms()) d = std::max(d, m.phase_degree());
  return d;
}

}  // namespace

FormalSymbol moyal_star(const FormalSymbol& f, const FormalSymbol& g) {
  f.require_compatible(g);
  const int d = f.dim();
  // Pi^k(f, g) = sum over (a, b) of coeff * (d^a f)(d^b g).
  std::map<std::pair<DerivIndex, DerivIndex>, Rational> ops{{{DerivIndex{}, DerivIndex{}}, Rational(1)}};
  FormalSymbol result = weyl::product(f, g);
  const int k_max = std::min(max_phase_degree(f), max_phase_degree(g));
  Rational factorial(1);
  for (int k = 1; k <= k_max; ++k) {
    std::map<std::pair<DerivIndex, DerivIndex>, Rational> next;
    for (const auto& [ab, c] : ops) {
      for (int j = 0; j < d; ++j) {
        auto plus = ab;
        ++plus.first[j];
        ++plus.second[d + j];
        next[plus] += c;
        auto minus = ab;
        ++minus.first[d + j];
        ++minus.second[j];
        next[minus] -= c;
      }
    }
    ops = std::move(next);
    factorial *= k;

    FormalSymbol pi_k(d, f.truncation());
    for (const auto& [ab, c] : ops) {
      if (sgn(c) == 0) continue;
      pi_k += weyl::product(apply_derivatives(f, ab.first),
                            apply_derivatives(g, ab.second)) *
              Complex(c);
    }
    // (i/2)^k / k!
    Rational scale = Rational(1) / factorial;
    scale /= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(k));
    result += times_hbar(pi_k, k) * Complex(scale).times_i_pow(k);
  }
  return result;
}

std::vector<double> hamiltonian_matrix_1d(const std::vector<double>& potential,
                                          double hbar, double omega, int size) {
  const int max_power = static_cast<int>(potential.size()) - 1;
  const int padded = size + std::max(max_power, 2) + 1;
  const double x_scale = std::sqrt(hbar / (2.0 * omega));
  const double p2_scale = -hbar * omega / 2.0;
  std::vector<double> h(static_cast<std::size_t>(size) * size, 0.0);

  // (a + sign * a^dagger) applied to a sparse state
  auto apply = [&](const std::map<int, double>& state, double sign) {
    std::map<int, double> out;
    for (const auto& [n, v] : state) {
      if (n > 0) out[n - 1] += v * std::sqrt(static_cast<double>(n));
      if (n + 1 < padded) out[n + 1] += sign * v * std::sqrt(static_cast<double>(n + 1));
    }
    return out;
  };

  for (int n = 0; n < size; ++n) {
    std::map<int, double> state{{n, 1.0}};
    // potential: sum_p c_p x^p |n>
    std::map<int, double> xp = state;
    for (int p = 0; p <= max_power; ++p) {
      if (p > 0) xp = apply(xp, 1.0);
      if (potential[p] == 0.0) continue;
      const double f = potential[p] * std::pow(x_scale, p);
      for (const auto& [m, v] : xp) {
        if (m < size) h[static_cast<std::size_t>(m) * size + n] += f * v;
      }
    }
    // p^2/2 = (1/2) * (-(hbar omega / 2)) (a^dagger - a)^2; (a - a^dagger)^2 is the same
    const auto k2 = apply(apply(state, -1.0), -1.0);
    for (const auto& [m, v] : k2) {
      if (m < size) h[static_cast<std::size_t>(m) * size + n] += 0.5 * p2_scale * v;
    }
  }
  return h;
}

}  // namespace birkhoff::reference
