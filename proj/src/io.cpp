#include "birkhoff/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "birkhoff/error.hpp"

namespace birkhoff::io {

namespace {

Error schema(const std::string& path, const std::string& why) {
  return Error(ErrorCode::kSchemaError, "at " + (path.empty() ? std::string("/") : path) + ": " + why);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw schema(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw schema(child(path, key), "missing field");
  return *it;
}

const Json& array_field(const Json& obj, const std::string& key, const std::string& path) {
  const Json& a = field(obj, key, path);
  if (!a.is_array()) throw schema(child(path, key), "expected an array");
  return a;
}

int as_int(const Json& j, const std::string& path, int lo, int hi) {
  if (!j.is_number_integer()) throw schema(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo || v > hi) {
    throw schema(path, "integer " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

Surd as_surd(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Surd(Rational(j.get<long>()));
  if (!j.is_string()) throw schema(path, "expected an exact scalar string");
  try {
    return Surd::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw schema(path, e.what());
  }
}

Complex as_complex(const Json& j, const std::string& path) {
  if (j.is_object()) {
    const Surd re = j.contains("re") ? as_surd(j["re"], child(path, "re")) : Surd();
    const Surd im = j.contains("im") ? as_surd(j["im"], child(path, "im")) : Surd();
    for (const auto& [key, value] : j.items()) {
      if (key != "re" && key != "im") throw schema(child(path, key), "unknown field");
    }
    return Complex(re, im);
  }
  return Complex(as_surd(j, path));
}

Json complex_json(const Complex& c) {
  if (c.is_real()) return c.re.to_string();
  return Json{{"re", c.re.to_string()}, {"im", c.im.to_string()}};
}

std::vector<int> exponents(const Json& obj, const std::string& key, const std::string& path,
                           int dim) {
  const Json& a = array_field(obj, key, path);
  const std::string here = child(path, key);
  if (static_cast<int>(a.size()) != dim) {
    throw schema(here, "expected " + std::to_string(dim) + " exponents");
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_int(a[i], child(here, i), 0, 255));
  return out;
}

int total(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

int parse_dim(const Json& doc) { return as_int(field(doc, "dim", ""), "/dim", 1, weyl::kMaxDim); }

std::vector<Surd> parse_omegas(const Json& doc, int dim) {
  const Json& a = array_field(doc, "omegas", "");
  if (static_cast<int>(a.size()) != dim) {
    throw schema("/omegas", "expected " + std::to_string(dim) + " frequencies");
  }
  std::vector<Surd> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_surd(a[i], child("/omegas", i)));
  return out;
}

Json surd_array(const std::vector<Surd>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v.to_string());
  return out;
}

Json double_array(const std::vector<double>& values, int digits) {
  Json out = Json::array();
  for (double v : values) out.push_back(format_double(v, digits));
  return out;
}

double as_double(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw schema(path, "expected a decimal number");
  const std::string text = j.get<std::string>();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw schema(path, "trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw schema(path, "malformed decimal '" + text + "'");
  }
}

}  // namespace

bnf::HamiltonianInput parse_hamiltonian(const Json& doc, int truncation) {
  bnf::HamiltonianInput h;
  h.dim = parse_dim(doc);
  h.omegas = parse_omegas(doc, h.dim);
  h.e0 = as_surd(field(doc, "E0", ""), "/E0");
  h.e1 = as_surd(field(doc, "E1", ""), "/E1");
  h.taylor = weyl::harmonic(h.dim, truncation, h.omegas);
  h.taylor += weyl::FormalSymbol::constant(h.dim, truncation, Complex(h.e0));
  h.taylor += weyl::FormalSymbol::monomial(h.dim, truncation, 1, std::vector<int>(h.dim),
                                           std::vector<int>(h.dim), Complex(h.e1));
  const Json& terms = array_field(doc, "taylor", "");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = child("/taylor", i);
    const Json& t = terms[i];
    const int hbar = as_int(field(t, "hbar", path), child(path, "hbar"), 0, 127);
    const std::vector<int> x = exponents(t, "x", path, h.dim);
    const std::vector<int> xi = exponents(t, "xi", path, h.dim);
    const Complex c = as_complex(field(t, "coeff", path), child(path, "coeff"));
    if (2 * hbar + total(x) + total(xi) <= 2) {
      throw schema(path, "terms of degree <= 2 are given by E0, E1 and omegas");
    }
    h.taylor += weyl::FormalSymbol::monomial(h.dim, truncation, hbar, x, xi, c);
  }
  return h;
}

int natural_truncation(const Json& doc) {
  const int dim = parse_dim(doc);
  int grade = 4;
  const Json& terms = array_field(doc, "taylor", "");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = child("/taylor", i);
    const int hbar = as_int(field(terms[i], "hbar", path), child(path, "hbar"), 0, 127);
    grade = std::max(grade, 2 * hbar + total(exponents(terms[i], "x", path, dim)) +
                                total(exponents(terms[i], "xi", path, dim)));
  }
  return grade + grade % 2;
}

Json serialize_hamiltonian(const bnf::HamiltonianInput& h) {
  Json out;
  out["dim"] = h.dim;
  out["omegas"] = surd_array(h.omegas);
  out["E0"] = h.e0.to_string();
  out["E1"] = h.e1.to_string();
  Json terms = Json::array();
  for (const auto& [m, c] : h.taylor.terms()) {
    if (m.grade() <= 2) continue;
    std::vector<int> x(h.dim), xi(h.dim);
    for (int j = 0; j < h.dim; ++j) {
      x[j] = m.q(j);
      xi[j] = m.p(h.dim, j);
    }
    terms.push_back(Json{{"hbar", m.hbar()}, {"x", x}, {"xi", xi}, {"coeff", complex_json(c)}});
  }
  out["taylor"] = std::move(terms);
  return out;
}

bnf::BNFData parse_bnf(const Json& doc) {
  bnf::BNFData data;
  data.dim = parse_dim(doc);
  data.omegas = parse_omegas(doc, data.dim);
  data.e0 = as_surd(field(doc, "E0", ""), "/E0");
  data.e1 = as_surd(field(doc, "E1", ""), "/E1");
  const Json& coeffs = array_field(doc, "coeffs", "");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string path = child("/coeffs", i);
    bnf::CoeffKey key;
    key.l = as_int(field(coeffs[i], "l", path), child(path, "l"), 0, 127);
    key.alpha = exponents(coeffs[i], "alpha", path, data.dim);
    if (key.order() < 2) throw schema(path, "l + |alpha| must be at least 2");
    const Surd c = as_surd(field(coeffs[i], "c", path), child(path, "c"));
    if (data.coeffs.contains(key)) throw schema(path, "duplicate (l, alpha)");
    if (!c.is_zero()) data.coeffs.emplace(std::move(key), c);
  }
  return data;
}

Json serialize_bnf(const bnf::BNFData& data) {
  Json out;
  out["dim"] = data.dim;
  out["omegas"] = surd_array(data.omegas);
  out["E0"] = data.e0.to_string();
  out["E1"] = data.e1.to_string();
  Json coeffs = Json::array();
  for (const auto& [key, c] : data.coeffs) {
    coeffs.push_back(Json{{"l", key.l}, {"alpha", key.alpha}, {"c", c.to_string()}});
  }
  out["coeffs"] = std::move(coeffs);
  return out;
}

spectrum::SpectralDataset parse_spectrum(const Json& doc) {
  spectrum::SpectralDataset data;
  if (doc.is_object() && doc.contains("dim")) {
    data.dim = as_int(doc["dim"], "/dim", 1, weyl::kMaxDim);
  }
  data.order = as_int(field(doc, "order", ""), "/order", 1, 64);
  const Json& levels = array_field(doc, "levels", "");
  std::vector<std::vector<Surd>> values;
  std::vector<Surd> all;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string path = child("/levels", i);
    const int n = as_int(field(levels[i], "N", path), child(path, "N"), 1, 1 << 30);
    if (n != static_cast<int>(i) + 1) {
      throw schema(child(path, "N"), "levels must be listed as N = 1, 2, ...");
    }
    const Json& a = array_field(levels[i], "a", path);
    if (static_cast<int>(a.size()) != data.order + 1) {
      throw schema(child(path, "a"), "expected order + 1 coefficients");
    }
    std::vector<Surd> row;
    for (std::size_t j = 0; j < a.size(); ++j) {
      row.push_back(as_surd(a[j], child(child(path, "a"), j)));
      all.push_back(row.back());
    }
    values.push_back(std::move(row));
  }
  data.basis = basis_for(all);
  for (const auto& row : values) {
    std::vector<ExactReal> exact;
    for (const auto& v : row) exact.push_back(to_exact(v, data.basis));
    data.levels.push_back(std::move(exact));
  }
  return data;
}

Json serialize_spectrum(const spectrum::SpectralDataset& data) {
  Json out;
  if (data.dim) out["dim"] = *data.dim;
  out["order"] = data.order;
  Json levels = Json::array();
  for (std::size_t n = 0; n < data.levels.size(); ++n) {
    Json a = Json::array();
    for (const auto& v : data.levels[n]) a.push_back(to_surd(v).to_string());
    levels.push_back(Json{{"N", n + 1}, {"a", std::move(a)}});
  }
  out["levels"] = std::move(levels);
  return out;
}

oracle::PolynomialPotential parse_potential(const Json& doc) {
  const int dim = as_int(field(doc, "dim", ""), "/dim", 1, 2);
  std::map<std::vector<int>, double> coeffs;
  const Json& terms = array_field(doc, "coeffs", "");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = child("/coeffs", i);
    coeffs[exponents(terms[i], "x", path, dim)] +=
        as_double(field(terms[i], "c", path), child(path, "c"));
  }
  return oracle::PolynomialPotential::create(dim, std::move(coeffs));
}

std::string format_double(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

Json serialize_cluster(const resonant::ClusterSpectrum& s, int digits) {
  Json out;
  out["N"] = s.n;
  out["hbar"] = format_double(s.hbar, digits);
  out["dimension"] = s.dimension;
  out["center"] = format_double(s.center, digits);
  out["eigenvalues"] = double_array(s.eigenvalues, digits);
  return out;
}

Json serialize_scan(const oracle::ScanReport& r, int digits) {
  Json out;
  out["k"] = r.k;
  out["level"] = r.level;
  out["order"] = r.order;
  out["status"] = oracle::to_string(r.status);
  out["slope"] = format_double(r.slope, digits);
  out["intercept"] = format_double(r.intercept, digits);
  out["hbar"] = double_array(r.hbar, digits);
  out["numeric"] = double_array(r.numeric, digits);
  out["predicted"] = double_array(r.predicted, digits);
  out["residuals"] = double_array(r.residuals, digits);
  return out;
}

Json serialize_partition(const spectrum::PartitionReport& r, int digits) {
  Json out;
  out["levels"] = r.levels;
  out["multiset_equal"] = r.multiset_equal;
  out["passed"] = r.passed();
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(Json{{"z", format_double(s.z)},
                           {"closed_form", spectrum::to_decimal(s.closed_form, digits)},
                           {"truncated_sum", spectrum::to_decimal(s.truncated_sum, digits)},
                           {"difference", spectrum::to_decimal(s.difference, digits)},
                           {"tail_bound", spectrum::to_decimal(s.tail_bound, digits)},
                           {"gap_estimate", spectrum::to_decimal(s.gap_estimate, digits)},
                           {"within_bound", s.within_bound}});
  }
  out["samples"] = std::move(samples);
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError,
                "at byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << dump(doc);
}

}  // namespace birkhoff::io
