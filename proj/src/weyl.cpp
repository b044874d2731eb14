#include "birkhoff/weyl.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace birkhoff::weyl {

namespace {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long falling(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorCode::kInvalidInput,
                "dimension must be in 1.." + std::to_string(kMaxDim));
  }
}

enum class KernelMode { kStar, kScaledCommutator };

using TermList = std::vector<std::pair<Monomial, Complex>>;

template <Chart kChart>
TermList flatten(const Symbol<kChart>& f) {
  return TermList(f.terms().begin(), f.terms().end());
}

// Adds the contribution of one pair of monomials to `out`. For each split
// of the bidifferential operator into mu (d/dx on a, d/dxi on b) and nu
// (d/dxi on a, d/dx on b), the k = |mu| + |nu| term of
// sum_k (i hbar / 2)^k / k! Pi^k(a, b) is
//   (i hbar / 2)^k (-1)^|nu| / (mu! nu!) d_x^mu d_xi^nu a * d_xi^mu d_x^nu b.
void accumulate_pair(int dim, int truncation, KernelMode mode, const Monomial& ma,
                     const Complex& ca, const Monomial& mb, const Complex& cb,
                     Symbol<Chart::kReal>::Terms& out) {
  const int shift = mode == KernelMode::kStar ? 0 : 2;
  if (ma.grade() + mb.grade() - shift > truncation) return;

  std::array<int, kMaxDim> mu_max{};
  std::array<int, kMaxDim> nu_max{};
  for (int j = 0; j < dim; ++j) {
    mu_max[j] = std::min(ma.q(j), mb.p(dim, j));
    nu_max[j] = std::min(ma.p(dim, j), mb.q(j));
  }
  const Complex ab = ca * cb;
  std::array<int, kMaxDim> mu{};
  std::array<int, kMaxDim> nu{};
  while (true) {
    int k = 0;
    int nu_total = 0;
    for (int j = 0; j < dim; ++j) {
      k += mu[j] + nu[j];
      nu_total += nu[j];
    }
    if (mode == KernelMode::kStar || k % 2 == 1) {
      Rational r(1);
      for (int j = 0; j < dim; ++j) {
        const long num = falling(ma.q(j), mu[j]) * falling(mb.p(dim, j), mu[j]) *
                         falling(ma.p(dim, j), nu[j]) * falling(mb.q(j), nu[j]);
        const long den = falling(mu[j], mu[j]) * falling(nu[j], nu[j]);
        r *= Rational(num, den);
      }
      r /= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(k));
      if (nu_total % 2 == 1) r = -r;
      int i_power = k;
      if (mode == KernelMode::kScaledCommutator) {
        r *= 2;
        i_power += 1;
      }
      r.canonicalize();

      Monomial m;
      m.set(0, ma.hbar() + mb.hbar() + k - shift / 2);
      for (int j = 0; j < dim; ++j) {
        m.set(1 + j, ma.q(j) - mu[j] + mb.q(j) - nu[j]);
        m.set(1 + dim + j, ma.p(dim, j) - nu[j] + mb.p(dim, j) - mu[j]);
      }
      Complex term = (ab * r).times_i_pow(i_power);
      auto it = out.find(m);
      if (it == out.end()) {
        out.emplace(m, std::move(term));
      } else {
        it->second += term;
      }
    }
    // odometer over (mu, nu)
    int slot = 0;
    for (; slot < 2 * dim; ++slot) {
      int& v = slot < dim ? mu[slot] : nu[slot - dim];
      const int lim = slot < dim ? mu_max[slot] : nu_max[slot - dim];
      if (v < lim) {
        ++v;
        break;
      }
      v = 0;
    }
    if (slot == 2 * dim) break;
  }
}

FormalSymbol run_kernel(const FormalSymbol& f, const FormalSymbol& g, KernelMode mode) {
  f.require_compatible(g);
  const int dim = f.dim();
  const int truncation = f.truncation();
  const TermList fv = flatten(f);
  const TermList gv = flatten(g);
  FormalSymbol out(dim, truncation);
  const long n = static_cast<long>(fv.size());

#pragma omp parallel
  {
    FormalSymbol::Terms local;
#pragma omp for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      for (const auto& [mb, cb] : gv) {
        accumulate_pair(dim, truncation, mode, fv[i].first, fv[i].second, mb, cb, local);
      }
    }
#pragma omp critical(birkhoff_weyl_merge)
    {
      for (const auto& [m, c] : local) out.add(m, c);
    }
  }
  return out;
}

// x^p xi^q as a polynomial in (z, zbar), one mode.
struct ModeTerm {
  int a;
  int b;
  Complex c;
};

std::vector<ModeTerm> real_to_complex_mode(int p, int q) {
  // x = (z + zbar)/2, xi = (z - zbar)/(2i) = -i (z - zbar)/2
  std::map<std::pair<int, int>, Complex> acc;
  for (int r = 0; r <= p; ++r) {
    for (int s = 0; s <= q; ++s) {
      Rational c(binomial(p, r) * binomial(q, s));
      if ((q - s) % 2 == 1) c = -c;
      c /= Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(p + q));
      const Complex term = Complex(c).times_i_pow(3 * q);  // (-i)^q
      acc[{r + s, (p - r) + (q - s)}] += term;
    }
  }
  std::vector<ModeTerm> out;
  for (auto& [ab, c] : acc) {
    if (!c.is_zero()) out.push_back({ab.first, ab.second, c});
  }
  return out;
}

std::vector<ModeTerm> complex_to_real_mode(int a, int b) {
  // z^a zbar^b = (x + i xi)^a (x - i xi)^b; here ModeTerm{a, b} means x^a xi^b
  std::map<std::pair<int, int>, Complex> acc;
  for (int r = 0; r <= a; ++r) {
    for (int s = 0; s <= b; ++s) {
      const Rational c(binomial(a, r) * binomial(b, s));
      const Complex term = Complex(c).times_i_pow((a - r) + 3 * (b - s));
      acc[{r + s, (a - r) + (b - s)}] += term;
    }
  }
  std::vector<ModeTerm> out;
  for (auto& [xy, c] : acc) {
    if (!c.is_zero()) out.push_back({xy.first, xy.second, c});
  }
  return out;
}

// Applies a per-mode substitution to every term, multiplying across modes.
template <Chart kFrom, Chart kTo, typename ModeFn>
Symbol<kTo> change_chart(const Symbol<kFrom>& f, ModeFn mode_fn) {
  const int dim = f.dim();
  Symbol<kTo> out(dim, f.truncation());
  std::map<std::pair<int, int>, std::vector<ModeTerm>> cache;
  for (const auto& [m, c] : f.terms()) {
    struct Partial {
      std::array<int, 2 * kMaxDim> e;
      Complex c;
    };
    std::vector<Partial> partial{{{}, c}};
    for (int j = 0; j < dim; ++j) {
      const auto key = std::make_pair(m.q(j), m.p(dim, j));
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, mode_fn(key.first, key.second)).first;
      std::vector<Partial> next;
      next.reserve(partial.size() * it->second.size());
      for (const auto& part : partial) {
        for (const auto& mt : it->second) {
          Partial n = part;
          n.e[j] = mt.a;
          n.e[dim + j] = mt.b;
          n.c = part.c * mt.c;
          next.push_back(std::move(n));
        }
      }
      partial = std::move(next);
    }
    for (const auto& part : partial) {
      Monomial out_m;
      out_m.set(0, m.hbar());
      for (int s = 0; s < 2 * dim; ++s) out_m.set(1 + s, part.e[s]);
      out.add(out_m, part.c);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::make(int dim, int hbar, const std::vector<int>& q,
                        const std::vector<int>& p) {
  require_dim(dim);
  if (static_cast<int>(q.size()) != dim || static_cast<int>(p.size()) != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "exponent vectors must have length dim");
  }
  Monomial m;
  m.set(0, hbar);
  for (int j = 0; j < dim; ++j) {
    m.set(1 + j, q[j]);
    m.set(1 + dim + j, p[j]);
  }
  return m;
}

void Monomial::set(int slot, int value) {
  if (value < 0 || value > 255) {
    throw Error(ErrorCode::kInvalidInput, "exponent out of range: " + std::to_string(value));
  }
  const int shift = 8 * (kSlots - slot);
  packed_ &= ~(std::uint64_t{0xff} << shift);
  packed_ |= static_cast<std::uint64_t>(value) << shift;
}

int Monomial::grade() const {
  int g = 2 * get(0);
  for (int s = 1; s < kSlots; ++s) g += get(s);
  return g;
}

// ---------------------------------------------------------------- Symbol

template <Chart kChart>
Symbol<kChart>::Symbol(int dim, int truncation) : dim_(dim), truncation_(truncation) {
  require_dim(dim);
  if (truncation < 0) throw Error(ErrorCode::kInvalidInput, "negative truncation");
}

template <Chart kChart>
Symbol<kChart> Symbol<kChart>::constant(int dim, int truncation, const Complex& c) {
  Symbol s(dim, truncation);
  s.add(Monomial(), c);
  return s;
}

template <Chart kChart>
Symbol<kChart> Symbol<kChart>::monomial(int dim, int truncation, int hbar,
                                        const std::vector<int>& q,
                                        const std::vector<int>& p, const Complex& c) {
  Symbol s(dim, truncation);
  s.add(Monomial::make(dim, hbar, q, p), c);
  return s;
}

template <Chart kChart>
void Symbol<kChart>::add(const Monomial& m, const Complex& c) {
  if (c.is_zero() || m.grade() > truncation_) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

template <Chart kChart>
Complex Symbol<kChart>::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex() : it->second;
}

template <Chart kChart>
int Symbol<kChart>::min_grade() const {
  int g = -1;
  for (const auto& [m, c] : terms_) {
    if (g < 0 || m.grade() < g) g = m.grade();
  }
  return g;
}

template <Chart kChart>
int Symbol<kChart>::max_grade() const {
  int g = -1;
  for (const auto& [m, c] : terms_) g = std::max(g, m.grade());
  return g;
}

template <Chart kChart>
bool Symbol<kChart>::is_real_valued() const {
  if constexpr (kChart == Chart::kReal) {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_real(); });
  } else {
    for (const auto& [m, c] : terms_) {
      Monomial swapped;
      swapped.set(0, m.hbar());
      for (int j = 0; j < dim_; ++j) {
        swapped.set(1 + j, m.p(dim_, j));
        swapped.set(1 + dim_ + j, m.q(j));
      }
      if (!(coeff(swapped) == c.conj())) return false;
    }
    return true;
  }
}

template <Chart kChart>
void Symbol<kChart>::require_compatible(const Symbol& other) const {
  if (dim_ != other.dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(dim_) + " vs " + std::to_string(other.dim_));
  }
  if (truncation_ != other.truncation_) {
    throw Error(ErrorCode::kTruncationMismatch,
                std::to_string(truncation_) + " vs " + std::to_string(other.truncation_));
  }
}

template <Chart kChart>
Symbol<kChart>& Symbol<kChart>::operator+=(const Symbol& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

template <Chart kChart>
Symbol<kChart>& Symbol<kChart>::operator-=(const Symbol& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.terms_) add(m, -c);
  return *this;
}

template <Chart kChart>
Symbol<kChart>& Symbol<kChart>::operator*=(const Complex& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v = v * c;
  return *this;
}

template <Chart kChart>
std::string Symbol<kChart>::to_string() const {
  if (terms_.empty()) return "0";
  const char* qn = kChart == Chart::kReal ? "x" : "z";
  const char* pn = kChart == Chart::kReal ? "xi" : "zb";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (m.hbar() > 0) os << "*h^" << m.hbar();
    for (int j = 0; j < dim_; ++j) {
      if (m.q(j) > 0) os << "*" << qn << j + 1 << "^" << m.q(j);
      if (m.p(dim_, j) > 0) os << "*" << pn << j + 1 << "^" << m.p(dim_, j);
    }
  }
  return os.str();
}

template class Symbol<Chart::kReal>;
template class Symbol<Chart::kComplex>;

// ---------------------------------------------------------------- operations

template <Chart kChart>
Symbol<kChart> grade_component(const Symbol<kChart>& f, int n) {
  Symbol<kChart> out(f.dim(), f.truncation());
  for (const auto& [m, c] : f.terms()) {
    if (m.grade() == n) out.add(m, c);
  }
  return out;
}

template <Chart kChart>
Symbol<kChart> product(const Symbol<kChart>& f, const Symbol<kChart>& g) {
  f.require_compatible(g);
  Symbol<kChart> out(f.dim(), f.truncation());
  for (const auto& [ma, ca] : f.terms()) {
    for (const auto& [mb, cb] : g.terms()) {
      if (ma.grade() + mb.grade() > f.truncation()) continue;
      Monomial m;
      for (int s = 0; s < Monomial::kSlots; ++s) m.set(s, ma.get(s) + mb.get(s));
      out.add(m, ca * cb);
    }
  }
  return out;
}

template <Chart kChart>
Symbol<kChart> derivative(const Symbol<kChart>& f, int slot) {
  if (slot < 1 || slot > 2 * f.dim()) {
    throw Error(ErrorCode::kInvalidInput, "derivative slot out of range");
  }
  Symbol<kChart> out(f.dim(), f.truncation());
  for (const auto& [m, c] : f.terms()) {
    const int e = m.get(slot);
    if (e == 0) continue;
    Monomial d = m;
    d.set(slot, e - 1);
    out.add(d, c * Rational(e));
  }
  return out;
}

template FormalSymbol grade_component(const FormalSymbol&, int);
template ComplexSymbol grade_component(const ComplexSymbol&, int);
template FormalSymbol product(const FormalSymbol&, const FormalSymbol&);
template ComplexSymbol product(const ComplexSymbol&, const ComplexSymbol&);
template FormalSymbol derivative(const FormalSymbol&, int);
template ComplexSymbol derivative(const ComplexSymbol&, int);

FormalSymbol moyal_star(const FormalSymbol& f, const FormalSymbol& g) {
  return run_kernel(f, g, KernelMode::kStar);
}

FormalSymbol scaled_commutator(const FormalSymbol& s, const FormalSymbol& f) {
  return run_kernel(s, f, KernelMode::kScaledCommutator);
}

FormalSymbol poisson(const FormalSymbol& f, const FormalSymbol& g) {
  f.require_compatible(g);
  const int d = f.dim();
  FormalSymbol out(d, f.truncation());
  for (int j = 0; j < d; ++j) {
    out += product(derivative(f, 1 + j), derivative(g, 1 + d + j));
    out -= product(derivative(f, 1 + d + j), derivative(g, 1 + j));
  }
  return out;
}

ComplexSymbol poisson(const ComplexSymbol& f, const ComplexSymbol& g) {
  f.require_compatible(g);
  const int d = f.dim();
  ComplexSymbol out(d, f.truncation());
  for (int j = 0; j < d; ++j) {
    out += product(derivative(f, 1 + d + j), derivative(g, 1 + j));
    out -= product(derivative(f, 1 + j), derivative(g, 1 + d + j));
  }
  return out * Complex(Surd(), Surd(2));
}

ComplexSymbol to_complex(const FormalSymbol& f) {
  return change_chart<Chart::kReal, Chart::kComplex>(f, real_to_complex_mode);
}

FormalSymbol from_complex(const ComplexSymbol& c, Reality reality) {
  FormalSymbol out = change_chart<Chart::kComplex, Chart::kReal>(c, complex_to_real_mode);
  if (reality == Reality::kRequireReal && !out.is_real_valued()) {
    throw Error(ErrorCode::kNonRealResult,
                "symbol in (z, zbar) is not conjugate-symmetric: " + c.to_string());
  }
  return out;
}

FormalSymbol conjugate_by(const FormalSymbol& s, const FormalSymbol& h,
                          LowDegree low_degree) {
  s.require_compatible(h);
  if (s.is_zero()) return h;
  const int min_grade = s.min_grade();
  if (min_grade < 3 && low_degree == LowDegree::kForbid) {
    throw Error(ErrorCode::kNonTerminating,
                "generator has a term of degree " + std::to_string(min_grade) +
                    " < 3; the conjugation series does not terminate");
  }
  const int max_steps = 4 * (h.truncation() + 2) + 16;
  FormalSymbol result = h;
  FormalSymbol term = h;
  for (int n = 1;; ++n) {
    term = scaled_commutator(s, term) * Complex(Rational(1, n));
    if (term.is_zero()) break;
    if (n > max_steps) {
      throw Error(ErrorCode::kNonTerminating,
                  "conjugation series still nonzero after " + std::to_string(n) + " terms");
    }
    result += term;
  }
  return result;
}

FormalSymbol harmonic(int dim, int truncation, const std::vector<Surd>& omegas) {
  if (static_cast<int>(omegas.size()) != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "need one frequency per degree of freedom");
  }
  FormalSymbol out(dim, truncation);
  for (int j = 0; j < dim; ++j) {
    out += action(dim, truncation, j) * Complex(omegas[j]);
  }
  return out;
}

FormalSymbol action(int dim, int truncation, int j) {
  std::vector<int> q(dim, 0);
  std::vector<int> p(dim, 0);
  q[j] = 2;
  FormalSymbol out = FormalSymbol::monomial(dim, truncation, 0, q, p, Rational(1, 2));
  q[j] = 0;
  p[j] = 2;
  out += FormalSymbol::monomial(dim, truncation, 0, q, p, Rational(1, 2));
  return out;
}

}  // namespace birkhoff::weyl
