#include "birkhoff/scalars.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

#include "birkhoff/linalg.hpp"

namespace birkhoff {

namespace {

constexpr int kDefaultCeilingBits = 256;
constexpr int kSurdHardLimitBits = 1 << 16;

std::atomic<int>& ceiling_storage() {
  static std::atomic<int> bits = [] {
    if (const char* env = std::getenv("BNF_PRECISION_BITS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return kDefaultCeilingBits;
  }();
  return bits;
}

Error parse_error(std::string_view text, std::string_view why) {
  return Error(ErrorCode::kParseError,
               std::string(why) + " in \"" + std::string(text) + "\"");
}

Rational pow2(int bits) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return Rational(p);
}

// Exact value of a decimal literal such as "-1.25e-3".
Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  mpz_class mantissa = 0;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --exponent;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw parse_error(text, "expected decimal digits");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const std::string rest(text.substr(i));
    char* end = nullptr;
    const long e = std::strtol(rest.c_str(), &end, 10);
    if (end == rest.c_str() || *end != '\0') {
      throw parse_error(text, "bad exponent");
    }
    exponent += e;
    i = text.size();
  }
  if (i != text.size()) throw parse_error(text, "trailing characters");
  Rational v(mantissa);
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    v *= Rational(ten);
  } else {
    v /= Rational(ten);
  }
  v.canonicalize();
  return negative ? Rational(-v) : v;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// n = factor^2 * core with core square-free.
std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t n) {
  std::uint64_t factor = 1;
  std::uint64_t core = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) factor *= p;
    if (e % 2 == 1) core *= p;
  }
  core *= n;
  return {factor, core};
}

// One parsed term of the text form.
struct TextTerm {
  Rational coeff;
  enum class Kind { kOne, kSqrt, kOpaque } kind = Kind::kOne;
  std::uint64_t radicand = 1;
  std::string label;
};

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  std::vector<TextTerm> parse() {
    std::vector<TextTerm> out;
    skip_ws();
    if (pos_ == text_.size()) throw parse_error(text_, "empty scalar");
    bool first = true;
    while (true) {
      skip_ws();
      bool negative = false;
      if (!first) {
        if (pos_ == text_.size()) break;
        if (text_[pos_] != '+' && text_[pos_] != '-') {
          throw parse_error(text_, "expected '+' between terms");
        }
        negative = text_[pos_] == '-';
        ++pos_;
        skip_ws();
      }
      while (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        if (text_[pos_] == '-') negative = !negative;
        ++pos_;
        skip_ws();
      }
      TextTerm t = term();
      if (negative) t.coeff = -t.coeff;
      out.push_back(std::move(t));
      first = false;
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool starts_with(std::string_view word) const {
    return text_.substr(pos_, word.size()) == word;
  }

  mpz_class digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw parse_error(text_, "expected digits");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  void radical(TextTerm& t) {
    if (starts_with("sqrt(")) {
      pos_ += 5;
      skip_ws();
      const mpz_class m = digits();
      skip_ws();
      expect(')');
      if (!m.fits_ulong_p() || m == 0) throw parse_error(text_, "bad radicand");
      t.kind = TextTerm::Kind::kSqrt;
      t.radicand = m.get_ui();
    } else if (starts_with("opaque(")) {
      pos_ += 7;
      const std::size_t close = text_.find(')', pos_);
      if (close == std::string_view::npos) throw parse_error(text_, "unclosed opaque(");
      t.kind = TextTerm::Kind::kOpaque;
      t.label = std::string(text_.substr(pos_, close - pos_));
      pos_ = close + 1;
    } else {
      throw parse_error(text_, "expected sqrt( or opaque(");
    }
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw parse_error(text_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  TextTerm term() {
    TextTerm t;
    t.coeff = 1;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      mpz_class num = digits();
      mpz_class den = 1;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        skip_ws();
        den = digits();
        if (den == 0) throw parse_error(text_, "zero denominator");
      }
      t.coeff = Rational(num, den);
      t.coeff.canonicalize();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        radical(t);
      }
    } else {
      radical(t);
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string join_terms(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0/1";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

// Conservative double estimate of sum c_i * sqrt(m_i): returns the value and
// an absolute error bound, or nullopt if a coefficient overflows.
std::optional<std::pair<double, double>> double_estimate(
    const std::vector<std::pair<Rational, double>>& terms) {
  double value = 0.0;
  double magnitude = 0.0;
  for (const auto& [c, root] : terms) {
    const double cd = c.get_d();
    if (!std::isfinite(cd)) return std::nullopt;
    value += cd * root;
    magnitude += std::fabs(cd * root);
  }
  return std::make_pair(value, magnitude * 1e-12 + 1e-300);
}

int sign_of(const Interval& iv) {
  if (sgn(iv.lo) > 0) return 1;
  if (sgn(iv.hi) < 0) return -1;
  return 0;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto terms = TermParser(text).parse();
  if (terms.size() != 1 || terms[0].kind != TextTerm::Kind::kOne) {
    throw parse_error(text, "expected a rational p/q");
  }
  return terms[0].coeff;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Interval operator+(const Interval& a, const Interval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

Interval scale(const Interval& a, const Rational& s) {
  if (sgn(s) >= 0) return {a.lo * s, a.hi * s};
  return {a.hi * s, a.lo * s};
}

int precision_ceiling_bits() { return ceiling_storage().load(); }

void set_precision_ceiling_bits(int bits) {
  if (bits <= 0) throw Error(ErrorCode::kInvalidInput, "precision must be positive");
  ceiling_storage().store(bits);
}

Interval sqrt_enclosure(std::uint64_t m, int bits) {
  mpz_class scaled(static_cast<unsigned long>(m));
  scaled <<= static_cast<mp_bitcnt_t>(2 * bits);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  const Rational unit = pow2(bits);
  Interval out{Rational(root) / unit, Rational(root + 1) / unit};
  if (root * root == scaled) out.hi = out.lo;
  return out;
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  return split_square(n).first == 1;
}

// ---------------------------------------------------------------- basis

BasisElement BasisElement::one() { return BasisElement(); }

BasisElement BasisElement::sqrt(std::uint64_t radicand) {
  BasisElement e;
  e.kind_ = Kind::kSqrt;
  e.radicand_ = radicand;
  return e;
}

BasisElement BasisElement::opaque(std::string label, std::string_view decimal,
                                  const Rational& error_bound, Refiner refiner) {
  if (sgn(error_bound) < 0) {
    throw Error(ErrorCode::kInvalidInput, "negative opaque error bound");
  }
  BasisElement e;
  e.kind_ = Kind::kOpaque;
  e.label_ = std::move(label);
  e.center_ = parse_decimal(decimal);
  e.error_ = error_bound;
  e.refiner_ = std::move(refiner);
  return e;
}

Interval BasisElement::enclosure(int bits) const {
  switch (kind_) {
    case Kind::kOne:
      return {Rational(1), Rational(1)};
    case Kind::kSqrt:
      return sqrt_enclosure(radicand_, bits);
    case Kind::kOpaque:
      if (refiner_) return refiner_(bits);
      return {center_ - error_, center_ + error_};
  }
  return {};
}

double BasisElement::approx() const {
  switch (kind_) {
    case Kind::kOne: return 1.0;
    case Kind::kSqrt: return std::sqrt(static_cast<double>(radicand_));
    case Kind::kOpaque: return center_.get_d();
  }
  return 0.0;
}

bool BasisElement::operator==(const BasisElement& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::kOne: return true;
    case Kind::kSqrt: return radicand_ == other.radicand_;
    case Kind::kOpaque:
      return label_ == other.label_ && center_ == other.center_ &&
             error_ == other.error_;
  }
  return false;
}

BasisPtr RealBasis::create(std::vector<BasisElement> elements) {
  if (elements.empty() || elements.front().kind() != BasisElement::Kind::kOne) {
    throw Error(ErrorCode::kInvalidInput, "basis must start with the element 1");
  }
  std::set<std::uint64_t> radicands;
  std::set<std::string> labels;
  for (std::size_t i = 1; i < elements.size(); ++i) {
    const auto& e = elements[i];
    switch (e.kind()) {
      case BasisElement::Kind::kOne:
        throw Error(ErrorCode::kInvalidInput, "element 1 repeated in basis");
      case BasisElement::Kind::kSqrt:
        if (e.radicand() < 2 || !is_squarefree(e.radicand())) {
          throw Error(ErrorCode::kInvalidInput,
                      "sqrt radicand must be square-free and > 1: " +
                          std::to_string(e.radicand()));
        }
        if (!radicands.insert(e.radicand()).second) {
          throw Error(ErrorCode::kInvalidInput,
                      "duplicate sqrt(" + std::to_string(e.radicand()) + ")");
        }
        break;
      case BasisElement::Kind::kOpaque:
        if (!labels.insert(e.label()).second) {
          throw Error(ErrorCode::kInvalidInput, "duplicate opaque label " + e.label());
        }
        break;
    }
  }
  return BasisPtr(new RealBasis(std::move(elements)));
}

BasisPtr RealBasis::sqrt_basis(std::vector<std::uint64_t> radicands) {
  std::sort(radicands.begin(), radicands.end());
  radicands.erase(std::unique(radicands.begin(), radicands.end()), radicands.end());
  std::vector<BasisElement> elements{BasisElement::one()};
  for (auto r : radicands) {
    if (r == 1) continue;
    elements.push_back(BasisElement::sqrt(r));
  }
  return create(std::move(elements));
}

std::optional<std::size_t> RealBasis::find_sqrt(std::uint64_t radicand) const {
  if (radicand == 1) return 0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].kind() == BasisElement::Kind::kSqrt &&
        elements_[i].radicand() == radicand) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> RealBasis::find_opaque(std::string_view label) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].kind() == BasisElement::Kind::kOpaque &&
        elements_[i].label() == label) {
      return i;
    }
  }
  return std::nullopt;
}

bool RealBasis::has_opaque() const {
  return std::any_of(elements_.begin(), elements_.end(), [](const auto& e) {
    return e.kind() == BasisElement::Kind::kOpaque;
  });
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------- ExactReal

ExactReal::ExactReal(BasisPtr basis, std::vector<Rational> coords)
    : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (!basis_) throw Error(ErrorCode::kInvalidInput, "null basis");
  if (coords_.size() != basis_->size()) {
    throw Error(ErrorCode::kBasisMismatch, "coordinate count differs from basis size");
  }
  for (auto& c : coords_) c.canonicalize();
}

ExactReal ExactReal::zero(BasisPtr basis) {
  const std::size_t n = basis->size();
  return ExactReal(std::move(basis), std::vector<Rational>(n));
}

ExactReal ExactReal::from_rational(BasisPtr basis, const Rational& value) {
  ExactReal out = zero(std::move(basis));
  out.coords_[0] = value;
  return out;
}

ExactReal ExactReal::parse(std::string_view text, BasisPtr basis) {
  ExactReal out = zero(basis);
  for (const auto& t : TermParser(text).parse()) {
    std::optional<std::size_t> index;
    switch (t.kind) {
      case TextTerm::Kind::kOne:
        index = 0;
        break;
      case TextTerm::Kind::kSqrt:
        if (t.radicand == 1) {
          index = 0;
        } else if (!is_squarefree(t.radicand)) {
          throw parse_error(text, "radicand not square-free");
        } else {
          index = basis->find_sqrt(t.radicand);
        }
        break;
      case TextTerm::Kind::kOpaque:
        index = basis->find_opaque(t.label);
        break;
    }
    if (!index) {
      throw Error(ErrorCode::kBasisMismatch,
                  "term of \"" + std::string(text) + "\" is outside the basis");
    }
    out.coords_[*index] += t.coeff;
  }
  return out;
}

bool ExactReal::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](const Rational& c) { return sgn(c) == 0; });
}

bool ExactReal::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) != 0) return false;
  }
  return true;
}

Interval ExactReal::enclosure(int bits) const {
  Rational total_abs = 0;
  std::size_t count = 0;
  for (const auto& c : coords_) {
    if (sgn(c) != 0) {
      total_abs += abs(c);
      ++count;
    }
  }
  int extra = 1;
  {
    const double t = total_abs.get_d() * static_cast<double>(count + 1);
    extra += std::isfinite(t) && t > 1 ? static_cast<int>(std::ceil(std::log2(t))) : 0;
  }
  Interval out{Rational(0), Rational(0)};
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    out = out + scale(basis_->element(i).enclosure(bits + extra), coords_[i]);
  }
  return out;
}

double ExactReal::to_double() const {
  double v = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) != 0) v += coords_[i].get_d() * basis_->element(i).approx();
  }
  return v;
}

std::string ExactReal::to_string() const {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    const auto& e = basis_->element(i);
    std::string s = format_rational(coords_[i]);
    if (e.kind() == BasisElement::Kind::kSqrt) {
      s += "*sqrt(" + std::to_string(e.radicand()) + ")";
    } else if (e.kind() == BasisElement::Kind::kOpaque) {
      s += "*opaque(" + e.label() + ")";
    }
    parts.push_back(std::move(s));
  }
  return join_terms(parts);
}

void ExactReal::require_same_basis(const ExactReal& other) const {
  if (!same_basis(basis_, other.basis_)) {
    throw Error(ErrorCode::kBasisMismatch, "operands over different bases");
  }
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
  require_same_basis(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) {
  require_same_basis(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

ExactReal& ExactReal::operator*=(const Rational& s) {
  Rational factor = s;
  factor.canonicalize();
  for (auto& c : coords_) c *= factor;
  return *this;
}

bool operator==(const ExactReal& a, const ExactReal& b) {
  a.require_same_basis(b);
  return a.coords_ == b.coords_;
}

Ordering compare(const ExactReal& a, const ExactReal& b) {
  const ExactReal diff = a - b;
  if (diff.is_zero()) return Ordering::kEqual;

  bool opaque = false;
  std::vector<std::pair<Rational, double>> terms;
  for (std::size_t i = 0; i < diff.coords().size(); ++i) {
    if (sgn(diff.coords()[i]) == 0) continue;
    const auto& e = diff.basis()->element(i);
    if (e.kind() == BasisElement::Kind::kOpaque) opaque = true;
    terms.emplace_back(diff.coords()[i], e.approx());
  }
  if (!opaque) {
    if (auto est = double_estimate(terms); est && std::fabs(est->first) > est->second) {
      return est->first > 0 ? Ordering::kGreater : Ordering::kLess;
    }
  }
  const int ceiling = precision_ceiling_bits();
  for (int bits = 64;; bits *= 2) {
    const int s = sign_of(diff.enclosure(bits));
    if (s > 0) return Ordering::kGreater;
    if (s < 0) return Ordering::kLess;
    if ((opaque && bits >= ceiling) || bits >= kSurdHardLimitBits) {
      throw Error(ErrorCode::kRefinementExhausted,
                  "cannot separate " + a.to_string() + " and " + b.to_string() +
                      " within " + std::to_string(bits) + " bits");
    }
  }
}

std::optional<std::vector<long>> integer_combination(
    const ExactReal& nu, const std::vector<ExactReal>& omegas) {
  const std::size_t k = omegas.size();
  const std::size_t m = nu.basis()->size();
  for (const auto& w : omegas) {
    if (!same_basis(w.basis(), nu.basis())) {
      throw Error(ErrorCode::kBasisMismatch, "frequencies and target over different bases");
    }
  }
  if (k == 0) {
    if (nu.is_zero()) return std::vector<long>{};
    return std::nullopt;
  }
  linalg::RationalMatrix a(m, std::vector<Rational>(k));
  linalg::RationalMatrix rhs(m, std::vector<Rational>(1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = omegas[j].coords()[i];
    rhs[i][0] = nu.coords()[i];
  }
  const auto result = linalg::solve(std::move(a), std::move(rhs));
  if (result.rank < k) {
    throw Error(ErrorCode::kDependentFrequencies,
                "frequency coordinate vectors are linearly dependent over Q");
  }
  if (!result.consistent) return std::nullopt;
  std::vector<long> n(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Rational& v = result.solution[j][0];
    if (v.get_den() != 1 || sgn(v) < 0 || !v.get_num().fits_slong_p()) {
      return std::nullopt;
    }
    n[j] = v.get_num().get_si();
  }
  return n;
}

// ---------------------------------------------------------------- Surd

namespace {

std::vector<Surd::Term> normalize_terms(std::vector<Surd::Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Surd::Term> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& t) { return sgn(t.second) == 0; }),
            out.end());
  return out;
}

template <typename Op>
std::vector<Surd::Term> merge_terms(const std::vector<Surd::Term>& a,
                                    const std::vector<Surd::Term>& b, Op op) {
  std::vector<Surd::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, op(Rational(0), b[j].second));
      ++j;
    } else {
      Rational v = op(a[i].second, b[j].second);
      if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Surd::Surd(const Rational& value) {
  if (sgn(value) != 0) {
    terms_.emplace_back(1, value);
    terms_.back().second.canonicalize();
  }
}

Surd Surd::sqrt(std::uint64_t n) {
  if (n == 0) return Surd();
  const auto [factor, core] = split_square(n);
  return Surd(std::vector<Term>{{core, Rational(static_cast<unsigned long>(factor))}});
}

Surd Surd::parse(std::string_view text) {
  Surd out;
  for (const auto& t : TermParser(text).parse()) {
    switch (t.kind) {
      case TextTerm::Kind::kOne:
        out += Surd(t.coeff);
        break;
      case TextTerm::Kind::kSqrt:
        out += Surd::sqrt(t.radicand) * t.coeff;
        break;
      case TextTerm::Kind::kOpaque:
        throw parse_error(text, "opaque terms have no field arithmetic");
    }
  }
  return out;
}

bool Surd::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1);
}

Rational Surd::rational_part() const {
  if (!terms_.empty() && terms_[0].first == 1) return terms_[0].second;
  return Rational(0);
}

std::vector<std::uint64_t> Surd::radicands() const {
  std::vector<std::uint64_t> out;
  for (const auto& t : terms_) {
    if (t.first != 1) out.push_back(t.first);
  }
  return out;
}

Interval Surd::enclosure(int bits) const {
  Rational total_abs = 0;
  for (const auto& t : terms_) total_abs += abs(t.second);
  int extra = 1;
  const double tot = total_abs.get_d() * static_cast<double>(terms_.size() + 1);
  if (std::isfinite(tot) && tot > 1) extra += static_cast<int>(std::ceil(std::log2(tot)));
  Interval out{Rational(0), Rational(0)};
  for (const auto& [m, c] : terms_) {
    out = out + scale(sqrt_enclosure(m, bits + extra), c);
  }
  return out;
}

double Surd::to_double() const {
  double v = 0.0;
  for (const auto& [m, c] : terms_) v += c.get_d() * std::sqrt(static_cast<double>(m));
  return v;
}

std::string Surd::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [m, c] : terms_) {
    std::string s = format_rational(c);
    if (m != 1) s += "*sqrt(" + std::to_string(m) + ")";
    parts.push_back(std::move(s));
  }
  return join_terms(parts);
}

int Surd::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return sgn(terms_[0].second);
  std::vector<std::pair<Rational, double>> approx;
  for (const auto& [m, c] : terms_) approx.emplace_back(c, std::sqrt(static_cast<double>(m)));
  if (auto est = double_estimate(approx); est && std::fabs(est->first) > est->second) {
    return est->first > 0 ? 1 : -1;
  }
  for (int bits = 64; bits <= kSurdHardLimitBits; bits *= 2) {
    if (const int s = sign_of(enclosure(bits)); s != 0) return s;
  }
  throw Error(ErrorCode::kRefinementExhausted, "sign of " + to_string());
}

Surd Surd::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kInvalidInput, "division by zero");
  std::set<std::uint64_t> primes;
  for (const auto& [m, c] : terms_) {
    for (auto p : prime_factors(m)) primes.insert(p);
  }
  Surd numerator(Rational(1));
  Surd denominator = *this;
  // Multiplying by the conjugate that flips sqrt(p) removes p from every
  // radicand of the denominator.
  for (auto p : primes) {
    Surd conj = denominator;
    for (auto& [m, c] : conj.terms_) {
      if (m % p == 0) c = -c;
    }
    numerator = numerator * conj;
    denominator = denominator * conj;
  }
  if (!denominator.is_rational() || denominator.is_zero()) {
    throw Error(ErrorCode::kInvalidInput, "surd rationalization failed");
  }
  return numerator * Rational(1 / denominator.rational_part());
}

Surd& Surd::operator+=(const Surd& other) {
  terms_ = merge_terms(terms_, other.terms_,
                       [](const Rational& x, const Rational& y) { return Rational(x + y); });
  return *this;
}

Surd& Surd::operator-=(const Surd& other) {
  terms_ = merge_terms(terms_, other.terms_,
                       [](const Rational& x, const Rational& y) { return Rational(x - y); });
  return *this;
}

Surd& Surd::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
  } else {
    Rational factor = s;
    factor.canonicalize();
    for (auto& t : terms_) t.second *= factor;
  }
  return *this;
}

Surd operator*(const Surd& a, const Surd& b) {
  if (a.is_zero() || b.is_zero()) return Surd();
  if (a.terms_.size() == 1 && a.terms_[0].first == 1) return b * a.terms_[0].second;
  if (b.terms_.size() == 1 && b.terms_[0].first == 1) return a * b.terms_[0].second;
  std::vector<Surd::Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const std::uint64_t g = std::gcd(ma, mb);
      out.emplace_back((ma / g) * (mb / g),
                       Rational(ca * cb * Rational(static_cast<unsigned long>(g))));
    }
  }
  return Surd(normalize_terms(std::move(out)));
}

Ordering compare(const Surd& a, const Surd& b) {
  const int s = (a - b).sign();
  if (s == 0) return Ordering::kEqual;
  return s > 0 ? Ordering::kGreater : Ordering::kLess;
}

BasisPtr basis_for(const std::vector<Surd>& values) {
  std::vector<std::uint64_t> radicands;
  for (const auto& v : values) {
    for (auto r : v.radicands()) radicands.push_back(r);
  }
  return RealBasis::sqrt_basis(std::move(radicands));
}

ExactReal to_exact(const Surd& value, const BasisPtr& basis) {
  ExactReal out = ExactReal::zero(basis);
  std::vector<Rational> coords = out.coords();
  for (const auto& [m, c] : value.terms()) {
    const auto index = basis->find_sqrt(m);
    if (!index) {
      throw Error(ErrorCode::kBasisMismatch,
                  "sqrt(" + std::to_string(m) + ") is not in the basis");
    }
    coords[*index] += c;
  }
  return ExactReal(basis, std::move(coords));
}

Surd to_surd(const ExactReal& value) {
  Surd out;
  for (std::size_t i = 0; i < value.coords().size(); ++i) {
    const Rational& c = value.coords()[i];
    if (sgn(c) == 0) continue;
    const auto& e = value.basis()->element(i);
    switch (e.kind()) {
      case BasisElement::Kind::kOne:
        out += Surd(c);
        break;
      case BasisElement::Kind::kSqrt:
        out += Surd::sqrt(e.radicand()) * c;
        break;
      case BasisElement::Kind::kOpaque:
        throw Error(ErrorCode::kBasisMismatch,
                    "opaque element " + e.label() + " has no field arithmetic");
    }
  }
  return out;
}

// ---------------------------------------------------------------- Complex

Complex Complex::times_i_pow(int k) const {
  switch (((k % 4) + 4) % 4) {
    case 0: return *this;
    case 1: return Complex(-im, re);
    case 2: return Complex(-re, -im);
    default: return Complex(im, -re);
  }
}

std::string Complex::to_string() const {
  if (im.is_zero()) return re.to_string();
  return "(" + re.to_string() + ") + i*(" + im.to_string() + ")";
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Rational& s) {
  re *= s;
  im *= s;
  return *this;
}

Complex operator*(const Complex& a, const Complex& b) {
  if (a.im.is_zero() && b.im.is_zero()) return Complex(a.re * b.re);
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex operator/(const Complex& a, const Complex& b) {
  const Surd norm = b.re * b.re + b.im * b.im;
  const Surd inv = norm.inverse();
  const Complex num = a * b.conj();
  return Complex(num.re * inv, num.im * inv);
}

}  // namespace birkhoff
