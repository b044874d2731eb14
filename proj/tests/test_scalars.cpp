#include <cmath>
#include <random>

#include "birkhoff/scalars.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

BasisPtr b2() { return RealBasis::sqrt_basis({2}); }

ExactReal er(std::string_view s, const BasisPtr& b) { return ExactReal::parse(s, b); }

Surd random_surd(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  const std::uint64_t radicands[] = {1, 2, 3, 6};
  Surd s;
  for (auto r : radicands) {
    s += Surd::sqrt(r) * Rational(num(rng), den(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("compare follows the represented order") {
  const auto b = b2();
  CHECK(compare(er("1 + 2*sqrt(2)", b), er("1 + 2*sqrt(2)", b)) == Ordering::kEqual);
  // sqrt(2) < 3/2 because 2 < 9/4
  CHECK(compare(er("sqrt(2)", b), er("3/2", b)) == Ordering::kLess);
  // (1 + sqrt 2)^2 = 3 + 2 sqrt 2 < 8 = (2 sqrt 2)^2, both sides positive
  CHECK(compare(er("1 + sqrt(2)", b), er("2*sqrt(2)", b)) == Ordering::kLess);
  CHECK(compare(er("2*sqrt(2)", b), er("1 + sqrt(2)", b)) == Ordering::kGreater);
}

TEST_CASE("compare resolves differences far below double precision") {
  // Consecutive convergents of sqrt(2): p^2 - 2q^2 = -1 puts p/q below, +1 above.
  // Both sit within 1e-24 of sqrt(2).
  const auto b = b2();
  const ExactReal root = er("sqrt(2)", b);
  CHECK(compare(er("2140758220993/1513744654945", b), root) == Ordering::kLess);
  CHECK(compare(er("886731088897/627013566048", b), root) == Ordering::kGreater);
}

TEST_CASE("opaque elements without refinement exhaust the ceiling") {
  auto basis = RealBasis::create(
      {BasisElement::one(), BasisElement::opaque("pi", "3.14159", Rational(1, 100000))});
  const ExactReal pi = ExactReal::parse("1/1*opaque(pi)", basis);
  const ExactReal approx = ExactReal::parse("314159/100000", basis);
  CHECK_THROWS_AS(compare(pi, approx), Error);
  try {
    compare(pi, approx);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRefinementExhausted);
  }
  // Far enough apart, the declared error bound already separates them.
  CHECK(compare(pi, ExactReal::parse("3", basis)) == Ordering::kGreater);
}

TEST_CASE("opaque element with a refiner resolves") {
  auto refine = [](int bits) { return sqrt_enclosure(7, bits); };
  auto basis = RealBasis::create(
      {BasisElement::one(), BasisElement::opaque("r7", "2.6457513", Rational(1, 1000000), refine)});
  const ExactReal r = ExactReal::parse("opaque(r7)", basis);
  CHECK(compare(r, ExactReal::parse("26457513/10000000", basis)) == Ordering::kGreater);
}

TEST_CASE("enclosures contain the value and meet the width bound") {
  const auto basis = RealBasis::sqrt_basis({2, 3, 5});
  const ExactReal v = er("1/3 + 7/2*sqrt(2) - 5*sqrt(3) + 1/9*sqrt(5)", basis);
  const double approx = 1.0 / 3 + 3.5 * std::sqrt(2.0) - 5 * std::sqrt(3.0) + std::sqrt(5.0) / 9;
  Rational previous_width = -1;
  for (int bits = 8; bits <= 256; bits *= 2) {
    const Interval iv = v.enclosure(bits);
    CHECK(iv.lo.get_d() <= approx + 1e-12);
    CHECK(iv.hi.get_d() >= approx - 1e-12);
    CHECK(iv.width() <= Rational(1) / Rational(mpz_class(1) << bits));
    if (sgn(previous_width) >= 0) CHECK(iv.width() * 2 <= previous_width);
    previous_width = iv.width();
  }
}

TEST_CASE("integer_combination") {
  const auto b = b2();
  const std::vector<ExactReal> omegas{er("1", b), er("sqrt(2)", b)};
  const auto n = integer_combination(er("2 + 3*sqrt(2)", b), omegas);
  REQUIRE(n.has_value());
  CHECK(*n == std::vector<long>{2, 3});

  CHECK_FALSE(integer_combination(er("1/2", b), {er("1", b)}).has_value());
  CHECK(*integer_combination(ExactReal::zero(b), omegas) == std::vector<long>{0, 0});
  CHECK_FALSE(integer_combination(er("2 - 3*sqrt(2)", b), omegas).has_value());

  try {
    integer_combination(er("3", b), {er("1", b), er("2", b)});
    FAIL("expected DEPENDENT_FREQUENCIES");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDependentFrequencies);
  }
}

TEST_CASE("integer_combination implies exact equality") {
  const auto basis = RealBasis::sqrt_basis({2, 3});
  const std::vector<ExactReal> omegas{er("1", basis), er("sqrt(2)", basis), er("sqrt(3)", basis)};
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> k(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    ExactReal nu = ExactReal::zero(basis);
    for (const auto& w : omegas) nu += Rational(k(rng)) * w;
    const auto n = integer_combination(nu, omegas);
    REQUIRE(n.has_value());
    ExactReal back = ExactReal::zero(basis);
    for (std::size_t i = 0; i < omegas.size(); ++i) back += Rational((*n)[i]) * omegas[i];
    CHECK(back == nu);
  }
}

TEST_CASE("field operations") {
  const auto b = b2();
  CHECK((er("1 + sqrt(2)", b) - er("1 + sqrt(2)", b)).is_zero());
  CHECK(Rational(3) * er("1/2 + sqrt(2)", b) == er("3/2 + 3*sqrt(2)", b));
  CHECK(er("1 + sqrt(2)", b) + er("1 - sqrt(2)", b) == er("2", b));
  const auto b3 = RealBasis::sqrt_basis({3});
  try {
    (void)(er("1", b) + er("1", b3));
    FAIL("expected BASIS_MISMATCH");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBasisMismatch);
  }
}

TEST_CASE("text form is canonical and round-trips") {
  const auto basis = RealBasis::sqrt_basis({2});
  const ExactReal v = er("1/3 + 2/1*sqrt(2)", basis);
  CHECK(v.to_string() == "1/3 + 2/1*sqrt(2)");
  CHECK(er("-1/1 + -4/6*sqrt(2)", basis).to_string() == "-1/1 + -2/3*sqrt(2)");
  CHECK(ExactReal::zero(basis).to_string() == "0/1");
  CHECK(format_rational(parse_rational("6/8")) == "3/4");

  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Surd s = random_surd(rng);
    CHECK(Surd::parse(s.to_string()) == s);
    CHECK(Surd::parse(s.to_string()).to_string() == s.to_string());
    const auto sb = basis_for({s});
    CHECK(ExactReal::parse(s.to_string(), sb).to_string() == s.to_string());
  }
  CHECK_THROWS_AS(Surd::parse("1/0"), Error);
  CHECK_THROWS_AS(Surd::parse("2*sqrt("), Error);
  CHECK_THROWS_AS(ExactReal::parse("sqrt(3)", basis), Error);
}

TEST_CASE("basis invariants are validated") {
  CHECK_THROWS_AS(RealBasis::create({BasisElement::sqrt(2)}), Error);
  CHECK_THROWS_AS(RealBasis::create({BasisElement::one(), BasisElement::sqrt(8)}), Error);
  CHECK_THROWS_AS(
      RealBasis::create({BasisElement::one(), BasisElement::sqrt(2), BasisElement::sqrt(2)}),
      Error);
}

TEST_CASE("surd field arithmetic") {
  CHECK(Surd::sqrt(8) == Surd::sqrt(2) * Rational(2));
  CHECK(Surd::sqrt(2) * Surd::sqrt(3) == Surd::sqrt(6));
  CHECK(Surd::sqrt(6) * Surd::sqrt(2) == Surd::sqrt(3) * Rational(2));
  // 1/(1 - sqrt 2) = -(1 + sqrt 2)
  CHECK((Surd(1) - Surd::sqrt(2)).inverse() == -(Surd(1) + Surd::sqrt(2)));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Surd a = random_surd(rng);
    if (a.is_zero()) continue;
    CHECK(a * a.inverse() == Surd(1));
    const Surd b = random_surd(rng);
    const Surd c = random_surd(rng);
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("surd order is a total order consistent with doubles") {
  std::mt19937 rng(5);
  std::vector<Surd> sample;
  for (int i = 0; i < 30; ++i) sample.push_back(random_surd(rng));
  for (const auto& a : sample) {
    for (const auto& b : sample) {
      const auto ab = compare(a, b);
      const auto ba = compare(b, a);
      CHECK((ab == Ordering::kEqual) == (ba == Ordering::kEqual));
      if (ab == Ordering::kLess) CHECK(ba == Ordering::kGreater);
      if (std::fabs(a.to_double() - b.to_double()) > 1e-9) {
        CHECK((ab == Ordering::kLess) == (a.to_double() < b.to_double()));
      }
      for (const auto& c : sample) {
        if (ab == Ordering::kLess && compare(b, c) == Ordering::kLess) {
          CHECK(compare(a, c) == Ordering::kLess);
        }
      }
    }
  }
}

TEST_CASE("complex arithmetic") {
  const Complex i = Complex::i();
  CHECK(i * i == Complex(-1));
  const Complex z(Surd(1), Surd::sqrt(2));
  CHECK(z / z == Complex(1));
  CHECK(z.times_i_pow(1) == z * i);
  CHECK(z.times_i_pow(-1) == z * i.conj());
}

TEST_CASE("surd and exact real conversion") {
  const Surd s = Surd::parse("1/2 + 3*sqrt(5)");
  const auto basis = basis_for({s});
  CHECK(to_surd(to_exact(s, basis)) == s);
  CHECK_THROWS_AS(to_exact(Surd::sqrt(7), basis), Error);
}
