#include "birkhoff/spectrum.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "birkhoff/error.hpp"

namespace birkhoff::spectrum {

namespace {

constexpr int kEnclosureBits = 240;

HighPrecision to_high(const Rational& q) {
  return HighPrecision(q.get_num().get_str()) / HighPrecision(q.get_den().get_str());
}

HighPrecision to_high(const Surd& s) {
  const Interval box = s.enclosure(kEnclosureBits);
  return to_high((box.lo + box.hi) / 2);
}

Surd half_shifted_dot(const std::vector<Surd>& omegas, const std::vector<int>& k) {
  Surd out;
  for (std::size_t j = 0; j < omegas.size(); ++j) out += omegas[j] * Rational(2 * k[j] + 1, 2);
  return out;
}

}  // namespace

std::optional<int> PsiTable::level_of(const std::vector<int>& k) const {
  const auto it = index.find(k);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

void require_sorted_positive(const std::vector<Surd>& omegas) {
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    if (omegas[j].sign() <= 0) throw Error(ErrorCode::kInvalidInput, "frequencies must be positive");
    if (j > 0) {
      const Ordering ord = compare(omegas[j - 1], omegas[j]);
      if (ord == Ordering::kEqual) {
        throw Error(ErrorCode::kDependentFrequencies, "two frequencies are equal");
      }
      if (ord == Ordering::kGreater) {
        throw Error(ErrorCode::kInvalidInput, "frequencies must be sorted increasingly");
      }
    }
  }
}

template <typename V>
std::vector<std::pair<std::vector<int>, V>> best_first(const std::vector<V>& omegas, const V& zero,
                                                       int m) {
  const int d = static_cast<int>(omegas.size());
  struct Node {
    V value;
    std::vector<int> k;
  };
  const auto later = [](const Node& a, const Node& b) {
    return compare(a.value, b.value) == Ordering::kGreater;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> frontier(later);
  std::set<std::vector<int>> seen;
  frontier.push(Node{zero, std::vector<int>(d, 0)});
  seen.insert(std::vector<int>(d, 0));

  std::vector<std::pair<std::vector<int>, V>> out;
  out.reserve(m);
  while (static_cast<int>(out.size()) < m) {
    Node node = frontier.top();
    frontier.pop();
    if (!out.empty() && out.back().second == node.value) {
      throw Error(ErrorCode::kDependentFrequencies,
                  "<omega|k> takes the value " + node.value.to_string() + " twice");
    }
    for (int j = 0; j < d; ++j) {
      std::vector<int> next = node.k;
      ++next[j];
      if (seen.insert(next).second) frontier.push(Node{node.value + omegas[j], next});
    }
    out.emplace_back(std::move(node.k), std::move(node.value));
  }
  if (!frontier.empty() && !out.empty() && frontier.top().value == out.back().second) {
    throw Error(ErrorCode::kDependentFrequencies,
                "<omega|k> takes the value " + out.back().second.to_string() + " twice");
  }
  return out;
}

}  // namespace

PsiTable psi_enumerate(const std::vector<Surd>& omegas, int m) {
  if (omegas.empty()) throw Error(ErrorCode::kEmptyInput, "no frequencies");
  require_sorted_positive(omegas);
  PsiTable table;
  table.dim = static_cast<int>(omegas.size());
  table.omegas = omegas;
  for (auto& [k, value] : best_first(omegas, Surd(), m)) {
    const int n = static_cast<int>(table.entries.size()) + 1;
    table.index.emplace(k, n);
    table.entries.push_back(PsiEntry{n, std::move(k), std::move(value)});
  }
  return table;
}

std::vector<ExactReal> lattice_values(const std::vector<ExactReal>& omegas, int m) {
  if (omegas.empty()) throw Error(ErrorCode::kEmptyInput, "no frequencies");
  std::vector<ExactReal> out;
  out.reserve(m);
  for (auto& entry : best_first(omegas, ExactReal::zero(omegas[0].basis()), m)) {
    out.push_back(std::move(entry.second));
  }
  return out;
}

std::vector<Surd> eigenvalue_expansion(const bnf::BNFData& bnf, const std::vector<int>& k,
                                       int order) {
  if (order < 1) throw Error(ErrorCode::kInvalidInput, "expansion order must be at least 1");
  if (static_cast<int>(k.size()) != bnf.dim) {
    throw Error(ErrorCode::kDimensionMismatch, "lattice point has the wrong dimension");
  }
  std::vector<Surd> out(order + 1);
  out[0] = bnf.e0;
  out[1] = bnf.e1 + half_shifted_dot(bnf.omegas, k);
  for (const auto& [key, c] : bnf.coeffs) {
    const int j = key.order();
    if (j < 2 || j > order) continue;
    Rational pw = 1;
    for (int i = 0; i < bnf.dim; ++i) {
      const Rational y(2 * k[i] + 1, 2);
      for (int e = 0; e < key.alpha[i]; ++e) pw *= y;
    }
    out[j] += c * pw;
  }
  return out;
}

void SpectralDataset::validate() const {
  if (order < 1) throw Error(ErrorCode::kInvalidInput, "dataset order must be at least 1");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    if (static_cast<int>(levels[n].size()) != order + 1) {
      throw Error(ErrorCode::kInvalidInput,
                  "level " + std::to_string(n + 1) + " does not have order + 1 coefficients");
    }
    for (const auto& a : levels[n]) {
      if (!same_basis(a.basis(), basis)) {
        throw Error(ErrorCode::kBasisMismatch,
                    "level " + std::to_string(n + 1) + " is not on the dataset basis");
      }
    }
  }
}

SpectralDataset spectrum_forward(const bnf::BNFData& bnf, int m, int order) {
  const PsiTable psi = psi_enumerate(bnf.omegas, m);
  if (order < 1) throw Error(ErrorCode::kInvalidInput, "expansion order must be at least 1");
  if (bnf.dim != psi.dim) throw Error(ErrorCode::kDimensionMismatch, "BNF dimension");
  std::vector<std::vector<Surd>> raw(m);
#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n < m; ++n) raw[n] = eigenvalue_expansion(bnf, psi.entries[n].k, order);

  std::vector<Surd> all;
  for (const auto& level : raw) all.insert(all.end(), level.begin(), level.end());
  SpectralDataset out;
  out.dim = bnf.dim;
  out.order = order;
  out.basis = basis_for(all);
  out.levels.reserve(m);
  for (const auto& level : raw) {
    std::vector<ExactReal> row;
    row.reserve(level.size());
    for (const auto& a : level) row.push_back(to_exact(a, out.basis));
    out.levels.push_back(std::move(row));
  }
  return out;
}

bool PartitionReport::passed() const {
  return multiset_equal &&
         std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.within_bound; });
}

PartitionReport partition_identity_check(const std::vector<ExactReal>& mu,
                                         const std::vector<Surd>& omegas,
                                         const std::vector<double>& zs) {
  if (mu.empty()) throw Error(ErrorCode::kEmptyInput, "no levels");
  for (double z : zs) {
    if (!(z >= 0.1)) throw Error(ErrorCode::kInvalidInput, "sample points need z >= 0.1");
  }
  const int m = static_cast<int>(mu.size());
  const Surd mu1 = to_surd(mu[0]);
  std::vector<Surd> nu;
  nu.reserve(m);
  for (const auto& level : mu) nu.push_back(to_surd(level) - mu1);
  std::sort(nu.begin(), nu.end(),
            [](const Surd& a, const Surd& b) { return compare(a, b) == Ordering::kLess; });

  const PsiTable psi = psi_enumerate(omegas, m + 1);
  for (int n = 0; n < m; ++n) {
    if (!(nu[n] == psi.entries[n].value)) {
      throw Error(ErrorCode::kMultisetMismatch,
                  "nu value " + nu[n].to_string() + " at sorted position " + std::to_string(n + 1) +
                      " differs from <omega|k> = " + psi.entries[n].value.to_string());
    }
  }

  PartitionReport report;
  report.levels = m;
  report.multiset_equal = true;

  const HighPrecision mu1_hp = to_high(mu1);
  std::vector<HighPrecision> nu_hp;
  nu_hp.reserve(m + 1);
  for (const auto& e : psi.entries) nu_hp.push_back(to_high(e.value));
  HighPrecision gap = nu_hp[1] - nu_hp[0];
  for (int n = 1; n <= m; ++n) gap = std::min(gap, HighPrecision(nu_hp[n] - nu_hp[n - 1]));

  for (double zd : zs) {
    const HighPrecision z(zd);
    PartitionSample s;
    s.z = zd;
    HighPrecision product = 1;
    HighPrecision half_product = 1;
    for (const auto& w : omegas) {
      const HighPrecision wh = to_high(w);
      product /= 1 - exp(-z * wh);
      half_product /= 1 - exp(-z * wh / 2);
    }
    const HighPrecision lead = exp(-z * mu1_hp);
    s.closed_form = lead * product;
    s.truncated_sum = 0;
    for (int n = 0; n < m; ++n) s.truncated_sum += exp(-z * (mu1_hp + nu_hp[n]));
    s.difference = s.closed_form - s.truncated_sum;
    s.tail_bound = lead * exp(-z * nu_hp[m] / 2) * half_product;
    s.gap_estimate = exp(-z * (mu1_hp + nu_hp[m])) / (1 - exp(-z * gap));
    s.within_bound = s.difference >= 0 && s.difference <= s.tail_bound;
    report.samples.push_back(s);
  }
  return report;
}

PartitionReport partition_identity_check(const std::vector<Surd>& omegas, const Surd& e1, int m,
                                         const std::vector<double>& zs) {
  const PsiTable psi = psi_enumerate(omegas, m);
  std::vector<Surd> mu;
  mu.reserve(m);
  for (const auto& e : psi.entries) mu.push_back(e1 + half_shifted_dot(omegas, e.k));
  const BasisPtr basis = basis_for(mu);
  std::vector<ExactReal> exact;
  exact.reserve(m);
  for (const auto& v : mu) exact.push_back(to_exact(v, basis));
  return partition_identity_check(exact, omegas, zs);
}

std::string to_decimal(const HighPrecision& value, int digits) {
  return value.str(digits, std::ios_base::scientific);
}

}  // namespace birkhoff::spectrum
