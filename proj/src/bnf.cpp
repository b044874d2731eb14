#include "birkhoff/bnf.hpp"

#include <numeric>

#include "birkhoff/linalg.hpp"

namespace birkhoff::bnf {

using weyl::ComplexSymbol;
using weyl::FormalSymbol;
using weyl::Monomial;

namespace {

Surd divisor(const Monomial& m, int dim, const std::vector<Surd>& omegas) {
  Surd out;
  for (int j = 0; j < dim; ++j) {
    const int diff = m.q(j) - m.p(dim, j);
    if (diff != 0) out += omegas[j] * Rational(diff);
  }
  return out;
}

bool is_diagonal(const Monomial& m, int dim) {
  for (int j = 0; j < dim; ++j) {
    if (m.q(j) != m.p(dim, j)) return false;
  }
  return true;
}

void add_to(CoeffMap& map, const CoeffKey& key, const Surd& value) {
  auto it = map.find(key);
  if (it == map.end()) {
    if (!value.is_zero()) map.emplace(key, value);
    return;
  }
  it->second += value;
  if (it->second.is_zero()) map.erase(it);
}

FormalSymbol quadratic_part(int dim, int truncation, const std::vector<Surd>& omegas,
                            const Surd& e1) {
  FormalSymbol out = weyl::harmonic(dim, truncation, omegas);
  out.add(Monomial::make(dim, 1, std::vector<int>(dim, 0), std::vector<int>(dim, 0)), e1);
  return out;
}

}  // namespace

int CoeffKey::order() const {
  return l + std::accumulate(alpha.begin(), alpha.end(), 0);
}

void validate(const HamiltonianInput& h, Resonance resonance) {
  const int d = h.dim;
  if (static_cast<int>(h.omegas.size()) != d || h.taylor.dim() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "frequencies and symbol must match dim");
  }
  for (int j = 0; j < d; ++j) {
    if (h.omegas[j].sign() <= 0) {
      throw Error(ErrorCode::kInvalidInput, "frequencies must be positive");
    }
    if (resonance == Resonance::kForbid && j > 0 &&
        compare(h.omegas[j - 1], h.omegas[j]) != Ordering::kLess) {
      throw Error(ErrorCode::kInvalidInput, "frequencies must be strictly increasing");
    }
  }
  if (resonance == Resonance::kForbid) {
    const BasisPtr basis = basis_for(h.omegas);
    linalg::RationalMatrix coords(basis->size(), std::vector<Rational>(d));
    for (int j = 0; j < d; ++j) {
      const ExactReal w = to_exact(h.omegas[j], basis);
      for (std::size_t i = 0; i < basis->size(); ++i) coords[i][j] = w.coords()[i];
    }
    if (linalg::rank(coords) < static_cast<std::size_t>(d)) {
      throw Error(ErrorCode::kDependentFrequencies,
                  "frequency coordinate vectors are linearly dependent over Q");
    }
  }
  const int trunc = h.taylor.truncation();
  if (!(weyl::grade_component(h.taylor, 0) == FormalSymbol::constant(d, trunc, h.e0))) {
    throw Error(ErrorCode::kInvalidInput, "degree-0 part of the symbol must equal E0");
  }
  if (!weyl::grade_component(h.taylor, 1).is_zero()) {
    throw Error(ErrorCode::kInvalidInput, "the symbol has a linear part; not a critical point");
  }
  if (trunc >= 2 &&
      !(weyl::grade_component(h.taylor, 2) == quadratic_part(d, trunc, h.omegas, h.e1))) {
    throw Error(ErrorCode::kInvalidInput,
                "degree-2 part must be hbar E1 + sum omega_j (x_j^2 + xi_j^2)/2");
  }
  if (!h.taylor.is_real_valued()) {
    throw Error(ErrorCode::kInvalidInput, "the Hamiltonian symbol must be real");
  }
}

CohomologicalSplit cohomological_solve(const ComplexSymbol& k, const std::vector<Surd>& omegas,
                                       Resonance resonance) {
  const int d = k.dim();
  if (static_cast<int>(omegas.size()) != d) {
    throw Error(ErrorCode::kDimensionMismatch, "need one frequency per degree of freedom");
  }
  if (k.min_grade() != k.max_grade()) {
    throw Error(ErrorCode::kInvalidInput, "cohomological_solve needs a homogeneous symbol");
  }
  CohomologicalSplit out{ComplexSymbol(d, k.truncation()), ComplexSymbol(d, k.truncation())};
  for (const auto& [m, c] : k.terms()) {
    if (is_diagonal(m, d)) {
      out.remainder.add(m, c);
      continue;
    }
    const Surd w = divisor(m, d, omegas);
    if (w.is_zero()) {
      if (resonance == Resonance::kKeep) {
        out.remainder.add(m, c);
        continue;
      }
      throw Error(ErrorCode::kResonantDenominator,
                  "<omega, a - b> = 0 for an off-diagonal monomial");
    }
    // c / (i w) = -i c / w
    out.generator.add(m, (c * Complex(w.inverse())).times_i_pow(3));
  }
  return out;
}

NormalForm normalize(const HamiltonianInput& h, int truncation, Resonance resonance) {
  validate(h, resonance);
  const int d = h.dim;
  FormalSymbol running(d, truncation);
  for (const auto& [m, c] : h.taylor.terms()) running.add(m, c);

  NormalForm out;
  for (int n = 3; n <= truncation; ++n) {
    const ComplexSymbol k = weyl::to_complex(weyl::grade_component(running, n));
    if (k.is_zero()) {
      out.generators.emplace_back(d, truncation);
      continue;
    }
    const CohomologicalSplit split = cohomological_solve(k, h.omegas, resonance);
    // g = -S maps K to R.
    FormalSymbol g = weyl::from_complex(split.generator) * Complex(-1);
    running = weyl::conjugate_by(g, running);
    out.generators.push_back(std::move(g));
  }
  out.symbol = weyl::to_complex(running);

  for (const auto& [m, c] : out.symbol.terms()) {
    if (m.grade() < 3) continue;
    if (resonance == Resonance::kForbid) {
      if (!is_diagonal(m, d)) {
        throw Error(ErrorCode::kInvalidInput, "normal form kept a non-action monomial");
      }
      if (m.grade() % 2 == 1) {
        throw Error(ErrorCode::kInvalidInput, "normal form kept an odd-degree term");
      }
    } else if (!divisor(m, d, h.omegas).is_zero()) {
      throw Error(ErrorCode::kInvalidInput, "normal form kept a non-resonant monomial");
    }
  }
  return out;
}

FormalSymbol replay(const std::vector<FormalSymbol>& generators, const FormalSymbol& h) {
  FormalSymbol out = h;
  for (const auto& g : generators) out = weyl::conjugate_by(g, out);
  return out;
}

CoeffMap action_coefficients(const ComplexSymbol& k) {
  const int d = k.dim();
  CoeffMap out;
  for (const auto& [m, c] : k.terms()) {
    if (!is_diagonal(m, d)) {
      throw Error(ErrorCode::kNotActionPolynomial,
                  "monomial with a != b in " + k.to_string());
    }
    if (!c.is_real()) {
      throw Error(ErrorCode::kNonRealResult, "action coefficient is not real");
    }
    CoeffKey key{m.hbar(), std::vector<int>(d)};
    int total = 0;
    for (int j = 0; j < d; ++j) {
      key.alpha[j] = m.q(j);
      total += m.q(j);
    }
    // (z zbar)^a = (2 I)^a
    add_to(out, key, c.re * Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(total)));
  }
  return out;
}

CoeffMap star_power(int dim, const std::vector<int>& alpha) {
  const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
  const int trunc = std::max(2 * total, 2);
  FormalSymbol acc = FormalSymbol::constant(dim, trunc, 1);
  for (int j = 0; j < dim; ++j) {
    const FormalSymbol ij = weyl::action(dim, trunc, j);
    for (int k = 0; k < alpha[j]; ++k) acc = weyl::moyal_star(acc, ij);
  }
  return action_coefficients(weyl::to_complex(acc));
}

CoeffMap omega_basis_convert(const ComplexSymbol& k) {
  const int d = k.dim();
  CoeffMap remaining = action_coefficients(k);
  CoeffMap out;
  std::map<std::vector<int>, CoeffMap> cache;
  while (!remaining.empty()) {
    // I^{*beta} = I^beta + (lower |beta|), so peel off a top-degree term.
    auto lead = remaining.begin();
    int lead_degree = -1;
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      const int deg = std::accumulate(it->first.alpha.begin(), it->first.alpha.end(), 0);
      if (deg > lead_degree) {
        lead_degree = deg;
        lead = it;
      }
    }
    const CoeffKey key = lead->first;
    const Surd c = lead->second;
    add_to(out, key, c);
    auto cached = cache.find(key.alpha);
    if (cached == cache.end()) cached = cache.emplace(key.alpha, star_power(d, key.alpha)).first;
    for (const auto& [pk, pv] : cached->second) {
      add_to(remaining, CoeffKey{key.l + pk.l, pk.alpha}, -(c * pv));
    }
  }
  return out;
}

CoeffMap reexpand(int dim, const CoeffMap& omega_coeffs) {
  CoeffMap out;
  for (const auto& [key, c] : omega_coeffs) {
    for (const auto& [pk, pv] : star_power(dim, key.alpha)) {
      add_to(out, CoeffKey{key.l + pk.l, pk.alpha}, c * pv);
    }
  }
  return out;
}

BNFData bnf_of_hamiltonian(const HamiltonianInput& h, int truncation) {
  const NormalForm nf = normalize(h, truncation, Resonance::kForbid);
  const int d = h.dim;
  ComplexSymbol higher(d, truncation);
  for (const auto& [m, c] : nf.symbol.terms()) {
    if (m.grade() > 2) higher.add(m, c);
  }
  BNFData out;
  out.dim = d;
  out.omegas = h.omegas;
  out.e0 = h.e0;
  out.e1 = h.e1;
  out.coeffs = omega_basis_convert(higher);
  return out;
}

}  // namespace birkhoff::bnf
