#pragma once

// Exact real scalars.
//
// Two representations live here:
//   * ExactReal: a rational coordinate vector over a declared RealBasis whose
//     elements are assumed linearly independent over Q. Supports the linear
//     operations plus an order decided by interval refinement.
//   * Surd: an element of a multiquadratic field Q(sqrt(p1), sqrt(p2), ...),
//     stored sparsely by square-free radicand. Closed under multiplication
//     and inversion.
// Both print in the same text form: "p/q" terms joined with " + ", each
// optionally followed by "*sqrt(m)".

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "birkhoff/error.hpp"

namespace birkhoff {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
// Always "p/q", including q == 1.
std::string format_rational(const Rational& value);

struct Interval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval scale(const Interval& a, const Rational& s);

// Refinement ceiling for comparisons involving opaque basis elements. Reads
// BNF_PRECISION_BITS on first use; defaults to 256.
int precision_ceiling_bits();
void set_precision_ceiling_bits(int bits);

// [floor(sqrt(m)*2^bits), +1] / 2^bits.
Interval sqrt_enclosure(std::uint64_t m, int bits);

bool is_squarefree(std::uint64_t n);

enum class Ordering { kLess, kEqual, kGreater };

class BasisElement {
 public:
  enum class Kind { kOne, kSqrt, kOpaque };
  // Enclosure of width <= 2^-bits, used when refinement is available.
  using Refiner = std::function<Interval(int bits)>;

  static BasisElement one();
  static BasisElement sqrt(std::uint64_t radicand);
  // An externally supplied real, known as `decimal` +/- `error_bound`. Its
  // independence from the other elements is the caller's declaration.
  static BasisElement opaque(std::string label, std::string_view decimal,
                             const Rational& error_bound,
                             Refiner refiner = nullptr);

  Kind kind() const { return kind_; }
  std::uint64_t radicand() const { return radicand_; }
  const std::string& label() const { return label_; }
  bool refinable() const { return static_cast<bool>(refiner_); }

  Interval enclosure(int bits) const;
  double approx() const;

  bool operator==(const BasisElement& other) const;

 private:
  Kind kind_ = Kind::kOne;
  std::uint64_t radicand_ = 1;
  std::string label_;
  Rational center_;
  Rational error_;
  Refiner refiner_;
};

class RealBasis;
using BasisPtr = std::shared_ptr<const RealBasis>;

class RealBasis {
 public:
  // Validates: first element is 1, sqrt radicands square-free, > 1 and
  // pairwise distinct, opaque labels distinct.
  static BasisPtr create(std::vector<BasisElement> elements);
  // {1, sqrt(r) for r in radicands}; radicands are sorted and deduplicated.
  static BasisPtr sqrt_basis(std::vector<std::uint64_t> radicands);

  std::size_t size() const { return elements_.size(); }
  const BasisElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  std::optional<std::size_t> find_sqrt(std::uint64_t radicand) const;
  std::optional<std::size_t> find_opaque(std::string_view label) const;
  bool has_opaque() const;

  bool operator==(const RealBasis& other) const {
    return elements_ == other.elements_;
  }

 private:
  explicit RealBasis(std::vector<BasisElement> elements)
      : elements_(std::move(elements)) {}
  std::vector<BasisElement> elements_;
};

bool same_basis(const BasisPtr& a, const BasisPtr& b);

class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(BasisPtr basis, std::vector<Rational> coords);

  static ExactReal zero(BasisPtr basis);
  static ExactReal from_rational(BasisPtr basis, const Rational& value);
  // Parses the text form against `basis`; every radicand must be present.
  static ExactReal parse(std::string_view text, BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<Rational>& coords() const { return coords_; }
  bool is_zero() const;
  bool is_rational() const;

  // Width <= 2^-bits unless a non-refinable opaque element is involved.
  Interval enclosure(int bits) const;
  double to_double() const;
  std::string to_string() const;

  ExactReal& operator+=(const ExactReal& other);
  ExactReal& operator-=(const ExactReal& other);
  ExactReal& operator*=(const Rational& s);

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(const Rational& s, ExactReal a) { return a *= s; }
  friend ExactReal operator-(ExactReal a) { return a *= Rational(-1); }
  // Coordinate equality. Throws BASIS_MISMATCH across bases.
  friend bool operator==(const ExactReal& a, const ExactReal& b);

 private:
  void require_same_basis(const ExactReal& other) const;

  BasisPtr basis_;
  std::vector<Rational> coords_;
};

// Order of the represented reals. Equal coordinates give kEqual without any
// numerics; otherwise enclosures of a - b are refined until they exclude 0.
Ordering compare(const ExactReal& a, const ExactReal& b);

// The unique n >= 0 with nu = sum n_i * omegas[i], if one exists. Throws
// DEPENDENT_FREQUENCIES when the coordinate vectors of `omegas` are
// linearly dependent over Q.
std::optional<std::vector<long>> integer_combination(
    const ExactReal& nu, const std::vector<ExactReal>& omegas);

class Surd {
 public:
  using Term = std::pair<std::uint64_t, Rational>;

  Surd() = default;
  Surd(const Rational& value);  // NOLINT(google-explicit-constructor)
  Surd(long value) : Surd(Rational(value)) {}  // NOLINT
  Surd(int value) : Surd(Rational(value)) {}  // NOLINT
  // sqrt(n) for any n >= 0, reduced to f*sqrt(m) with m square-free.
  static Surd sqrt(std::uint64_t n);
  static Surd parse(std::string_view text);

  // Sorted by radicand; 1 is the rational part. No zero coefficients.
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_part() const;
  std::vector<std::uint64_t> radicands() const;

  Interval enclosure(int bits) const;
  double to_double() const;
  std::string to_string() const;
  int sign() const;
  Surd inverse() const;

  Surd& operator+=(const Surd& other);
  Surd& operator-=(const Surd& other);
  Surd& operator*=(const Rational& s);

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator-(Surd a) { return a *= Rational(-1); }
  friend Surd operator*(const Surd& a, const Surd& b);
  friend Surd operator*(Surd a, const Rational& s) { return a *= s; }
  friend Surd operator*(const Rational& s, Surd a) { return a *= s; }
  friend Surd operator/(const Surd& a, const Surd& b) { return a * b.inverse(); }
  friend bool operator==(const Surd& a, const Surd& b) {
    return a.terms_ == b.terms_;
  }

 private:
  explicit Surd(std::vector<Term> terms) : terms_(std::move(terms)) {}
  std::vector<Term> terms_;
};

Ordering compare(const Surd& a, const Surd& b);

// Smallest sqrt basis holding every radicand that appears.
BasisPtr basis_for(const std::vector<Surd>& values);
ExactReal to_exact(const Surd& value, const BasisPtr& basis);
// Requires a basis without opaque elements.
Surd to_surd(const ExactReal& value);

// Gaussian element over the multiquadratic field.
struct Complex {
  Surd re;
  Surd im;

  Complex() = default;
  Complex(Surd r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Complex(Surd r, Surd i) : re(std::move(r)), im(std::move(i)) {}
  Complex(const Rational& r) : re(r) {}  // NOLINT
  Complex(long r) : re(r) {}  // NOLINT
  Complex(int r) : re(r) {}  // NOLINT

  static Complex i() { return Complex(Surd(), Surd(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  Complex conj() const { return Complex(re, -im); }
  // this * i^k
  Complex times_i_pow(int k) const;
  std::string to_string() const;

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Rational& s);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator-(Complex a) { return a *= Rational(-1); }
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator*(Complex a, const Rational& s) { return a *= s; }
  friend Complex operator*(const Rational& s, Complex a) { return a *= s; }
  friend Complex operator/(const Complex& a, const Complex& b);
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

}  // namespace birkhoff
