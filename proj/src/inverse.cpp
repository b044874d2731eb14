#include "birkhoff/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>

#include "birkhoff/error.hpp"
#include "birkhoff/linalg.hpp"

namespace birkhoff::inverse {

using spectrum::PsiTable;
using spectrum::SpectralDataset;

namespace {

// All k in Z>=0^d with |k| <= j, in lexicographic order.
std::vector<std::vector<int>> simplex_lattice(int d, int j) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(d, 0);
  std::function<void(int, int)> fill = [&](int slot, int left) {
    if (slot == d) {
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[slot] = v;
      fill(slot + 1, left - v);
    }
    k[slot] = 0;
  };
  fill(0, j);
  return out;
}

Rational lattice_power(const std::vector<int>& k, const std::vector<int>& beta) {
  Rational out = 1;
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (int e = 0; e < beta[i]; ++e) out *= k[i];
  }
  return out;
}

std::string join_levels(const std::vector<int>& levels) {
  std::string out;
  for (int n : levels) out += (out.empty() ? "" : ", ") + std::to_string(n);
  return out;
}

std::string format_point(const std::vector<int>& k) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.size(); ++i) out += (i ? "," : "") + std::to_string(k[i]);
  return out + ")";
}

Rational binomial(int n, int k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(out);
}

// Every value of sum n_i omega_i that is <= limit, with multiplicity.
void combinations_below(const std::vector<double>& omegas, std::size_t slot, double value,
                        double limit, std::vector<double>& out) {
  if (slot == omegas.size()) {
    out.push_back(value);
    return;
  }
  for (double v = value; v <= limit; v += omegas[slot]) {
    combinations_below(omegas, slot + 1, v, limit, out);
  }
}

}  // namespace

LevelData extract_e0_e1(const SpectralDataset& dataset) {
  dataset.validate();
  if (dataset.levels.empty()) throw Error(ErrorCode::kEmptyInput, "dataset has no levels");
  LevelData out;
  out.e0 = dataset.levels[0][0];
  std::vector<int> offending;
  out.mu.reserve(dataset.levels.size());
  for (std::size_t n = 0; n < dataset.levels.size(); ++n) {
    if (!(dataset.levels[n][0] == out.e0)) offending.push_back(static_cast<int>(n) + 1);
    out.mu.push_back(dataset.levels[n][1]);
  }
  if (!offending.empty()) {
    throw Error(ErrorCode::kInconsistentE0,
                "a_0 differs from a_0(1) at levels " + join_levels(offending));
  }
  return out;
}

SieveResult sieve_omegas(const std::vector<ExactReal>& mu, std::optional<int> expected_dim) {
  if (mu.empty()) throw Error(ErrorCode::kEmptyInput, "no levels to sieve");
  for (std::size_t n = 1; n < mu.size(); ++n) {
    if (compare(mu[n - 1], mu[n]) != Ordering::kLess) {
      throw Error(ErrorCode::kInvalidInput,
                  "mu is not strictly increasing at level " + std::to_string(n + 1));
    }
  }
  const int m = static_cast<int>(mu.size());
  if (m < 2) throw Error(ErrorCode::kInsufficientLevels, "the sieve needs at least two levels");

  std::vector<ExactReal> nu;
  nu.reserve(m);
  for (const auto& v : mu) nu.push_back(v - mu[0]);

  SieveResult out;
  for (int n = 1; n < m; ++n) {
    if (out.omegas.empty() || !integer_combination(nu[n], out.omegas)) out.omegas.push_back(nu[n]);
  }
  out.dim = static_cast<int>(out.omegas.size());
  out.coverage = nu.back();

  const std::vector<ExactReal> generated = spectrum::lattice_values(out.omegas, m);
  for (int n = 0; n < m; ++n) {
    if (!(generated[n] == nu[n])) {
      throw Error(ErrorCode::kMultisetMismatch,
                  "nu_" + std::to_string(n + 1) + " = " + nu[n].to_string() +
                      " but the discovered frequencies give " + generated[n].to_string());
    }
  }

  if (expected_dim) {
    if (*expected_dim != out.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "detected " + std::to_string(out.dim) + " frequencies, expected " +
                      std::to_string(*expected_dim));
    }
  } else if (compare(Rational(2) * out.omegas.back(), out.coverage) == Ordering::kGreater) {
    throw Error(ErrorCode::kAmbiguousTail,
                "largest frequency " + out.omegas.back().to_string() +
                    " exceeds half the coverage window " + out.coverage.to_string());
  }
  return out;
}

ApproxSieveResult sieve_omegas_approx(const std::vector<double>& mu, double eps,
                                      std::optional<int> expected_dim) {
  if (mu.empty()) throw Error(ErrorCode::kEmptyInput, "no levels to sieve");
  if (mu.size() < 2) throw Error(ErrorCode::kInsufficientLevels, "the sieve needs at least two levels");
  for (std::size_t n = 1; n < mu.size(); ++n) {
    if (!(mu[n] > mu[n - 1] + eps)) {
      throw Error(ErrorCode::kInvalidInput,
                  "mu is not strictly increasing at level " + std::to_string(n + 1));
    }
  }
  std::vector<double> nu;
  nu.reserve(mu.size());
  for (double v : mu) nu.push_back(v - mu[0]);
  const double limit = nu.back() + eps;

  ApproxSieveResult out;
  std::vector<double> generated{0.0};
  for (std::size_t n = 1; n < nu.size(); ++n) {
    const auto it = std::lower_bound(generated.begin(), generated.end(), nu[n] - eps);
    if (it != generated.end() && std::abs(*it - nu[n]) <= eps) continue;
    out.omegas.push_back(nu[n]);
    generated.clear();
    combinations_below(out.omegas, 0, 0.0, limit, generated);
    std::sort(generated.begin(), generated.end());
  }
  out.dim = static_cast<int>(out.omegas.size());
  out.coverage = nu.back();

  for (std::size_t n = 0; n < nu.size(); ++n) {
    if (n >= generated.size() || std::abs(generated[n] - nu[n]) > eps) {
      throw Error(ErrorCode::kMultisetMismatch,
                  "nu_" + std::to_string(n + 1) + " is not the next combination of the frequencies");
    }
  }
  if (expected_dim) {
    if (*expected_dim != out.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "detected " + std::to_string(out.dim) + " frequencies, expected " +
                      std::to_string(*expected_dim));
    }
  } else if (out.dim > 0 && 2 * out.omegas.back() > out.coverage) {
    throw Error(ErrorCode::kAmbiguousTail, "largest frequency exceeds half the coverage window");
  }
  return out;
}

ExactReal ClusterPolynomial::evaluate(const std::vector<int>& k, const BasisPtr& basis) const {
  ExactReal out = ExactReal::zero(basis);
  for (const auto& [beta, c] : coeffs) out += lattice_power(k, beta) * c;
  return out;
}

ClusterPolynomial recover_pj(const SpectralDataset& dataset, const PsiTable& psi, int j) {
  dataset.validate();
  if (j < 0 || j > dataset.order) {
    throw Error(ErrorCode::kInvalidInput, "requested P_j beyond the dataset order");
  }
  const int d = psi.dim;
  const int available = static_cast<int>(std::min(dataset.levels.size(), psi.entries.size()));
  const std::vector<std::vector<int>> points = simplex_lattice(d, j);

  std::vector<int> rows;
  std::vector<std::string> missing;
  for (const auto& k : points) {
    const auto n = psi.level_of(k);
    if (!n || *n > available) {
      missing.push_back(format_point(k));
    } else {
      rows.push_back(*n);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kInsufficientLevels, "no level for lattice points " + list);
  }

  const BasisPtr& basis = dataset.basis;
  const std::size_t width = basis->size();
  linalg::RationalMatrix a(points.size(), std::vector<Rational>(points.size()));
  linalg::RationalMatrix rhs(points.size(), std::vector<Rational>(width));
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (std::size_t c = 0; c < points.size(); ++c) a[r][c] = lattice_power(points[r], points[c]);
    rhs[r] = dataset.levels[rows[r] - 1][j].coords();
  }
  const linalg::SolveResult solved = linalg::solve(std::move(a), std::move(rhs));
  if (solved.rank != points.size() || !solved.consistent) {
    throw Error(ErrorCode::kInvalidInput, "simplex-lattice interpolation system is singular");
  }

  ClusterPolynomial out;
  out.degree = j;
  out.dim = d;
  for (std::size_t c = 0; c < points.size(); ++c) {
    ExactReal value(basis, solved.solution[c]);
    if (!value.is_zero()) out.coeffs.emplace(points[c], std::move(value));
  }

  std::vector<int> mismatched;
  for (int n = 1; n <= available; ++n) {
    const auto& k = psi.entries[n - 1].k;
    if (std::accumulate(k.begin(), k.end(), 0) <= j) continue;
    if (!(out.evaluate(k, basis) == dataset.levels[n - 1][j])) mismatched.push_back(n);
  }
  if (!mismatched.empty()) {
    throw Error(ErrorCode::kOverdeterminedMismatch,
                "P_" + std::to_string(j) + " interpolant contradicts levels " +
                    join_levels(mismatched));
  }
  return out;
}

bnf::BNFData recover_c(const std::vector<ClusterPolynomial>& polynomials,
                       const std::vector<Surd>& omegas, const Surd& e0, const Surd& e1) {
  bnf::BNFData out;
  out.dim = static_cast<int>(omegas.size());
  out.omegas = omegas;
  out.e0 = e0;
  out.e1 = e1;
  for (const auto& p : polynomials) {
    if (p.dim != out.dim) throw Error(ErrorCode::kDimensionMismatch, "polynomial dimension");
    if (p.degree < 2) continue;
    // Z^beta = prod_i sum_{gamma_i} binom(beta_i, gamma_i) (-1/2)^{beta_i - gamma_i} Y^gamma_i
    std::map<std::vector<int>, Surd> shifted;
    for (const auto& [beta, c] : p.coeffs) {
      if (std::accumulate(beta.begin(), beta.end(), 0) > p.degree) {
        throw Error(ErrorCode::kInvalidInput, "polynomial exceeds its degree");
      }
      const Surd value = to_surd(c);
      for (const auto& gamma : simplex_lattice(out.dim, p.degree)) {
        Rational factor = 1;
        bool below = true;
        for (int i = 0; i < out.dim && below; ++i) {
          if (gamma[i] > beta[i]) {
            below = false;
            break;
          }
          factor *= binomial(beta[i], gamma[i]);
          for (int e = 0; e < beta[i] - gamma[i]; ++e) factor *= Rational(-1, 2);
        }
        if (below) shifted[gamma] += value * factor;
      }
    }
    for (const auto& [gamma, c] : shifted) {
      if (c.is_zero()) continue;
      const int total = std::accumulate(gamma.begin(), gamma.end(), 0);
      out.coeffs.emplace(bnf::CoeffKey{p.degree - total, gamma}, c);
    }
  }
  return out;
}

bnf::BNFData invert_spectrum(const SpectralDataset& dataset, std::optional<int> expected_dim) {
  dataset.validate();
  if (dataset.order < 2) throw Error(ErrorCode::kInvalidInput, "inversion needs order >= 2");
  if (dataset.basis->has_opaque()) {
    throw Error(ErrorCode::kInvalidInput, "inversion needs a basis of square roots");
  }
  const LevelData levels = extract_e0_e1(dataset);
  const SieveResult sieve = sieve_omegas(levels.mu, expected_dim ? expected_dim : dataset.dim);

  std::vector<Surd> omegas;
  omegas.reserve(sieve.omegas.size());
  Surd half_sum;
  for (const auto& w : sieve.omegas) {
    omegas.push_back(to_surd(w));
    half_sum += omegas.back() * Rational(1, 2);
  }
  const Surd e1 = to_surd(levels.mu[0]) - half_sum;
  const PsiTable psi = spectrum::psi_enumerate(omegas, static_cast<int>(dataset.levels.size()));

  std::vector<ClusterPolynomial> polynomials(dataset.order - 1);
  std::vector<std::exception_ptr> failures(polynomials.size());
#pragma omp parallel for schedule(dynamic)
  for (int j = 2; j <= dataset.order; ++j) {
    try {
      polynomials[j - 2] = recover_pj(dataset, psi, j);
    } catch (...) {
      failures[j - 2] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return recover_c(polynomials, omegas, to_surd(levels.e0), e1);
}

}  // namespace birkhoff::inverse
