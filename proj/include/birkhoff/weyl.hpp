#pragma once

// Truncated formal series in (hbar, x, xi) under the Moyal star product.
//
// Grading: degree(hbar^j x^a xi^b) = 2j + |a| + |b|. A symbol carries its
// truncation D and silently drops anything of higher degree; binary
// operations require equal dimension and truncation.
//
// Sign conventions are pinned by
//   x * xi - xi * x = i hbar
//   {Sigma, z^a zbar^b} = i <omega, a - b> z^a zbar^b,   z = x + i xi
// with {f, g} = sum_j f_{x_j} g_{xi_j} - f_{xi_j} g_{x_j}.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "birkhoff/scalars.hpp"

namespace birkhoff::weyl {

inline constexpr int kMaxDim = 3;

// Exponents of hbar and of the 2*dim phase-space variables, packed into one
// word. Slot 0 is hbar, slots 1..dim the positions (or z), slots
// dim+1..2*dim the momenta (or zbar).
class Monomial {
 public:
  static constexpr int kSlots = 1 + 2 * kMaxDim;

  Monomial() = default;
  static Monomial make(int dim, int hbar, const std::vector<int>& q,
                       const std::vector<int>& p);

  int get(int slot) const {
    return static_cast<int>((packed_ >> (8 * (kSlots - slot))) & 0xffu);
  }
  void set(int slot, int value);

  int hbar() const { return get(0); }
  int q(int j) const { return get(1 + j); }
  int p(int dim, int j) const { return get(1 + dim + j); }
  int grade() const;
  // Polynomial degree in the phase-space variables only.
  int phase_degree() const { return grade() - 2 * hbar(); }

  auto operator<=>(const Monomial&) const = default;

 private:
  std::uint64_t packed_ = 0;
};

enum class Chart { kReal, kComplex };

template <Chart kChart>
class Symbol {
 public:
  using Terms = std::map<Monomial, Complex>;

  Symbol() = default;
  Symbol(int dim, int truncation);

  static Symbol constant(int dim, int truncation, const Complex& c);
  // hbar^hbar * prod q_j^{q[j]} p_j^{p[j]}, q/p being (x, xi) or (z, zbar).
  static Symbol monomial(int dim, int truncation, int hbar,
                         const std::vector<int>& q, const std::vector<int>& p,
                         const Complex& c);

  int dim() const { return dim_; }
  int truncation() const { return truncation_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Adds c to the coefficient of m; ignored beyond the truncation.
  void add(const Monomial& m, const Complex& c);
  Complex coeff(const Monomial& m) const;

  // -1 for the zero symbol.
  int min_grade() const;
  int max_grade() const;

  // Real chart: all coefficients real. Complex chart: coeff(j,a,b) is the
  // conjugate of coeff(j,b,a).
  bool is_real_valued() const;

  Symbol& operator+=(const Symbol& other);
  Symbol& operator-=(const Symbol& other);
  Symbol& operator*=(const Complex& c);

  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  friend Symbol operator*(Symbol a, const Complex& c) { return a *= c; }
  friend Symbol operator*(const Complex& c, Symbol a) { return a *= c; }
  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.dim_ == b.dim_ && a.truncation_ == b.truncation_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

  void require_compatible(const Symbol& other) const;

 private:
  int dim_ = 1;
  int truncation_ = 0;
  Terms terms_;
};

using FormalSymbol = Symbol<Chart::kReal>;
using ComplexSymbol = Symbol<Chart::kComplex>;

extern template class Symbol<Chart::kReal>;
extern template class Symbol<Chart::kComplex>;

template <Chart kChart>
Symbol<kChart> grade_component(const Symbol<kChart>& f, int n);

// Pointwise (commutative) product.
template <Chart kChart>
Symbol<kChart> product(const Symbol<kChart>& f, const Symbol<kChart>& g);

// Derivative with respect to one packed slot (1..2*dim).
template <Chart kChart>
Symbol<kChart> derivative(const Symbol<kChart>& f, int slot);

// f * g. OpenMP-parallel over the terms of f.
FormalSymbol moyal_star(const FormalSymbol& f, const FormalSymbol& g);

// (i/hbar)(s * f - f * s) at the truncation of the inputs.
FormalSymbol scaled_commutator(const FormalSymbol& s, const FormalSymbol& f);

FormalSymbol poisson(const FormalSymbol& f, const FormalSymbol& g);
// Same bracket written in (z, zbar): 2i sum_j (f_{zbar_j} g_{z_j} - f_{z_j} g_{zbar_j}).
ComplexSymbol poisson(const ComplexSymbol& f, const ComplexSymbol& g);

ComplexSymbol to_complex(const FormalSymbol& f);

enum class Reality { kRequireReal, kAllowComplex };
// Throws NON_REAL_RESULT under kRequireReal if a coefficient has an
// imaginary part.
FormalSymbol from_complex(const ComplexSymbol& c,
                          Reality reality = Reality::kRequireReal);

enum class LowDegree { kForbid, kAllow };
// exp((i/hbar) ad_S) H, i.e. e^{iS/hbar} * H * e^{-iS/hbar}. Each step raises
// the degree by (deg S - 2), so the series terminates when every term of S
// has degree >= 3. Lower-degree generators need kAllow and must still yield
// a terminating series.
FormalSymbol conjugate_by(const FormalSymbol& s, const FormalSymbol& h,
                          LowDegree low_degree = LowDegree::kForbid);

// sum_j omega_j (x_j^2 + xi_j^2) / 2
FormalSymbol harmonic(int dim, int truncation, const std::vector<Surd>& omegas);
// I_j = (x_j^2 + xi_j^2) / 2
FormalSymbol action(int dim, int truncation, int j);

}  // namespace birkhoff::weyl
