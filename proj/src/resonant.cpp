#include "birkhoff/resonant.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "birkhoff/error.hpp"

namespace birkhoff::resonant {

namespace {

Rational falling(int n, int k) {
  Rational out = 1;
  for (int i = 0; i < k; ++i) out *= n - i;
  return out;
}

Rational factorial(int n) { return falling(n, n); }

int total(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// sqrt(2)^r as a surd.
Surd sqrt2_power(int r) {
  Surd out(Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(r / 2)));
  if (r % 2 == 1) out = out * Surd::sqrt(2);
  return out;
}

}  // namespace

void add_series(HalfHbarSeries& into, const HalfHbarSeries& term) {
  for (const auto& [e, c] : term) {
    auto it = into.find(e);
    if (it == into.end()) {
      if (!c.is_zero()) into.emplace(e, c);
      continue;
    }
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

std::complex<double> evaluate(const HalfHbarSeries& series, double hbar) {
  std::complex<double> out = 0;
  for (const auto& [e, c] : series) {
    out += std::complex<double>(c.re.to_double(), c.im.to_double()) * std::pow(hbar, 0.5 * e);
  }
  return out;
}

bool LadderPolynomial::is_hermitian() const {
  for (const auto& [key, series] : terms) {
    const auto it = terms.find(LadderKey{key.alpha, key.beta});
    if (it == terms.end() || it->second.size() != series.size()) return false;
    for (const auto& [e, c] : series) {
      const auto jt = it->second.find(e);
      if (jt == it->second.end() || !(jt->second == c.conj())) return false;
    }
  }
  return true;
}

LadderPolynomial weyl_to_wick(const weyl::ComplexSymbol& c, const Rational& kappa) {
  const int d = c.dim();
  LadderPolynomial out;
  out.dim = d;
  for (const auto& [m, coeff] : c.terms()) {
    std::vector<int> a(d), b(d);
    for (int j = 0; j < d; ++j) {
      a[j] = m.q(j);
      b[j] = m.p(d, j);
    }
    std::vector<int> n(d, 0);
    std::function<void(int)> contract = [&](int slot) {
      if (slot < d) {
        for (n[slot] = 0; n[slot] <= std::min(a[slot], b[slot]); ++n[slot]) contract(slot + 1);
        n[slot] = 0;
        return;
      }
      const int pairs = total(n);
      Rational factor = 1;
      for (int i = 0; i < pairs; ++i) factor *= kappa;
      if (factor == 0) return;
      LadderKey key{std::vector<int>(d), std::vector<int>(d)};
      for (int j = 0; j < d; ++j) {
        factor *= falling(a[j], n[j]) * falling(b[j], n[j]) / factorial(n[j]);
        key.beta[j] = b[j] - n[j];
        key.alpha[j] = a[j] - n[j];
      }
      const int rest = total(a) + total(b) - 2 * pairs;
      const int half_power = 2 * (m.hbar() + pairs) + rest;
      const Complex value = coeff * Complex(sqrt2_power(rest) * factor);
      add_series(out.terms[key], HalfHbarSeries{{half_power, value}});
      if (out.terms[key].empty()) out.terms.erase(key);
    };
    contract(0);
  }
  return out;
}

Rational calibrate_wick_kappa() {
  // z zbar / 2 normal-orders to hbar a^dagger a + kappa hbar / 2.
  const auto symbol = weyl::ComplexSymbol::monomial(1, 2, 0, {1}, {1}, Complex(Rational(1, 2)));
  const LadderKey constant{{0}, {0}};
  auto offset = [&](const Rational& kappa) {
    const LadderPolynomial l = weyl_to_wick(symbol, kappa);
    const auto it = l.terms.find(constant);
    if (it == l.terms.end()) return Rational(0);
    const auto jt = it->second.find(2);
    return jt == it->second.end() ? Rational(0) : jt->second.re.rational_part();
  };
  const Rational at0 = offset(0);
  const Rational at1 = offset(1);
  return (Rational(1, 2) - at0) / (at1 - at0);
}

std::vector<std::vector<int>> shell_states(int dim, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(dim, 0);
  std::function<void(int, int)> fill = [&](int slot, int left) {
    if (slot == dim - 1) {
      k[slot] = left;
      out.push_back(k);
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[slot] = v;
      fill(slot + 1, left - v);
    }
  };
  fill(0, n);
  return out;
}

Eigen::MatrixXcd FockBlock::evaluate(double hbar) const {
  const int size = static_cast<int>(states.size());
  Eigen::MatrixXcd out(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) out(r, c) = resonant::evaluate(entries[r][c], hbar);
  }
  return out;
}

FockBlock fock_matrix(const LadderPolynomial& l, int n) {
  for (const auto& [key, series] : l.terms) {
    if (total(key.beta) != total(key.alpha)) {
      throw Error(ErrorCode::kNotBlockDiagonal, "a term changes the number of quanta");
    }
  }
  FockBlock out;
  out.states = shell_states(l.dim, n);
  const int size = static_cast<int>(out.states.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < size; ++i) index.emplace(out.states[i], i);
  out.entries.assign(size, std::vector<HalfHbarSeries>(size));

  for (int c = 0; c < size; ++c) {
    const auto& k = out.states[c];
    for (const auto& [key, series] : l.terms) {
      std::vector<int> target(l.dim);
      mpz_class amplitude_sq = 1;
      bool annihilated = false;
      for (int j = 0; j < l.dim && !annihilated; ++j) {
        if (k[j] < key.alpha[j]) {
          annihilated = true;
          break;
        }
        const int lowered = k[j] - key.alpha[j];
        target[j] = lowered + key.beta[j];
        for (int i = 0; i < key.alpha[j]; ++i) amplitude_sq *= k[j] - i;
        for (int i = 1; i <= key.beta[j]; ++i) amplitude_sq *= lowered + i;
      }
      if (annihilated) continue;
      if (!amplitude_sq.fits_ulong_p()) {
        throw Error(ErrorCode::kInvalidInput, "ladder amplitude exceeds 64 bits");
      }
      const Complex amplitude(Surd::sqrt(amplitude_sq.get_ui()));
      HalfHbarSeries scaled;
      for (const auto& [e, coeff] : series) scaled.emplace(e, coeff * amplitude);
      add_series(out.entries[index.at(target)][c], scaled);
    }
  }
  return out;
}

FockBlock cluster_block(const weyl::ComplexSymbol& b, int n) {
  const int d = b.dim();
  const weyl::ComplexSymbol sigma =
      weyl::to_complex(weyl::harmonic(d, b.truncation(), std::vector<Surd>(d, Surd(1))));
  if (!weyl::poisson(sigma, b).is_zero()) {
    throw Error(ErrorCode::kNotCommuting, "the symbol does not Poisson-commute with Sigma");
  }
  return fock_matrix(weyl_to_wick(b), n);
}

ClusterSpectrum cluster_spectrum(const weyl::ComplexSymbol& b, int n, double hbar) {
  const FockBlock block = cluster_block(b, n);
  const Eigen::MatrixXcd m = block.evaluate(hbar);
  if ((m - m.adjoint()).norm() > 1e-12 * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::kInvalidInput, "cluster block is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotConverged, "Hermitian eigensolver failed");
  }

  const int d = b.dim();
  ClusterSpectrum out;
  out.n = n;
  out.hbar = hbar;
  out.dimension = static_cast<int>(block.states.size());
  const Complex p01 = b.coeff(weyl::Monomial::make(d, 1, std::vector<int>(d), std::vector<int>(d)));
  out.center = hbar * (n + 0.5 * d + p01.re.to_double());
  const Eigen::VectorXd& values = solver.eigenvalues();
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  return out;
}

}  // namespace birkhoff::resonant
