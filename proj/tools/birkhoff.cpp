#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "birkhoff/bnf.hpp"
#include "birkhoff/error.hpp"
#include "birkhoff/inverse.hpp"
#include "birkhoff/io.hpp"
#include "birkhoff/oracle.hpp"
#include "birkhoff/resonant.hpp"
#include "birkhoff/spectrum.hpp"

using namespace birkhoff;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;

void emit(const io::Json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << io::dump(doc);
  } else {
    io::write_json(out, doc);
  }
}

int load_truncation(const io::Json& doc, int degree) {
  return degree > 0 ? degree : io::natural_truncation(doc);
}

void require_truncation(int degree) {
  if (degree < 4 || degree % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput, "--degree must be even and at least 4");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* bits = std::getenv("BNF_PRECISION_BITS")) {
    try {
      set_precision_ceiling_bits(std::stoi(bits));
    } catch (const std::exception&) {
      std::cerr << "INVALID_INPUT: BNF_PRECISION_BITS must be an integer\n";
      return kExitValidation;
    }
  }

  CLI::App app{"Birkhoff normal forms and semiclassical spectra"};
  app.require_subcommand(1);

  std::string input, bnf_path, spectrum_path, potential_path, out;
  int degree = 0;
  int levels = 0;
  int order = 0;
  std::optional<int> dim;
  int max_n = 4;
  int basis_size = 64;
  std::vector<double> hbars;
  std::vector<double> zs{0.5, 1.0, 2.0};
  std::vector<int> k;
  std::vector<std::string> omegas;
  std::string e1 = "0";

  auto* bnf_cmd = app.add_subcommand("bnf", "Normalize a Hamiltonian and write its BNF data");
  bnf_cmd->add_option("--input", input, "Hamiltonian JSON")->required();
  bnf_cmd->add_option("--degree", degree, "Truncation degree D (even, >= 4)");
  bnf_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Forward map to the eigenvalue expansions");
  spectrum_cmd->add_option("--bnf", bnf_path, "BNF JSON")->required();
  spectrum_cmd->add_option("--levels", levels, "Number of levels M")->required();
  spectrum_cmd->add_option("--order", order, "Expansion order J")->required();
  spectrum_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  auto* invert_cmd = app.add_subcommand("invert", "Recover BNF data from a spectral dataset");
  invert_cmd->add_option("--spectrum", spectrum_path, "Spectrum JSON")->required();
  invert_cmd->add_option("--dim", dim, "Expected dimension");
  invert_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Forward map followed by inversion");
  roundtrip_cmd->add_option("--bnf", bnf_path, "BNF JSON")->required();
  roundtrip_cmd->add_option("--levels", levels, "Number of levels M")->required();
  roundtrip_cmd->add_option("--order", order, "Expansion order J")->required();

  auto* clusters_cmd = app.add_subcommand("clusters", "Resonant cluster eigenvalues");
  clusters_cmd->add_option("--input", input, "Hamiltonian JSON with omega = (1, ..., 1)")
      ->required();
  clusters_cmd->add_option("--degree", degree, "Truncation degree D (even, >= 4)");
  clusters_cmd->add_option("--max-n", max_n, "Largest shell N");
  clusters_cmd->add_option("--hbar", hbars, "hbar values")->required();
  clusters_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  auto* oracle_cmd = app.add_subcommand("oracle", "hbar scan against a numeric eigensolver");
  oracle_cmd->add_option("--potential", potential_path, "Potential JSON")->required();
  oracle_cmd->add_option("--bnf", bnf_path, "BNF JSON of the matching Hamiltonian")->required();
  oracle_cmd->add_option("--k", k, "Lattice point k")->required();
  oracle_cmd->add_option("--order", order, "Expansion order J")->required();
  oracle_cmd->add_option("--hbar", hbars, "Decreasing hbar grid")->required();
  oracle_cmd->add_option("--basis-size", basis_size, "1D basis size or 2D truncation");
  oracle_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  auto* partition_cmd =
      app.add_subcommand("check-partition", "Partition-function identity for a spectrum");
  partition_cmd->add_option("--omegas", omegas, "Frequencies as exact strings")->required();
  partition_cmd->add_option("--e1", e1, "E1 for the pure oscillator spectrum");
  partition_cmd->add_option("--levels", levels, "Number of levels M");
  partition_cmd->add_option("--spectrum", spectrum_path, "Use a_1 of this spectrum JSON");
  partition_cmd->add_option("--z", zs, "Sample points z >= 0.1");
  partition_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bnf_cmd) {
      const io::Json doc = io::read_json(input);
      const int d = load_truncation(doc, degree);
      require_truncation(d);
      emit(io::serialize_bnf(bnf::bnf_of_hamiltonian(io::parse_hamiltonian(doc, d), d)), out);
    } else if (*spectrum_cmd) {
      const bnf::BNFData data = io::parse_bnf(io::read_json(bnf_path));
      emit(io::serialize_spectrum(spectrum::spectrum_forward(data, levels, order)), out);
    } else if (*invert_cmd) {
      const spectrum::SpectralDataset ds = io::parse_spectrum(io::read_json(spectrum_path));
      emit(io::serialize_bnf(inverse::invert_spectrum(ds, dim)), out);
    } else if (*roundtrip_cmd) {
      const bnf::BNFData data = io::parse_bnf(io::read_json(bnf_path));
      const spectrum::SpectralDataset forward = spectrum::spectrum_forward(data, levels, order);
      const spectrum::SpectralDataset reread =
          io::parse_spectrum(io::parse_json_text(io::dump(io::serialize_spectrum(forward))));
      const bnf::BNFData recovered = inverse::invert_spectrum(reread);
      if (recovered == data) {
        std::cout << "EXACT MATCH\n";
      } else {
        std::cout << "MISMATCH\n" << io::dump(io::serialize_bnf(recovered));
        return kExitMismatch;
      }
    } else if (*clusters_cmd) {
      const io::Json doc = io::read_json(input);
      const int d = load_truncation(doc, degree);
      require_truncation(d);
      const bnf::NormalForm nf =
          bnf::normalize(io::parse_hamiltonian(doc, d), d, bnf::Resonance::kKeep);
      io::Json result = io::Json::array();
      for (double hbar : hbars) {
        for (int n = 0; n <= max_n; ++n) {
          result.push_back(io::serialize_cluster(resonant::cluster_spectrum(nf.symbol, n, hbar)));
        }
      }
      emit(result, out);
    } else if (*oracle_cmd) {
      const oracle::PolynomialPotential v = io::parse_potential(io::read_json(potential_path));
      const bnf::BNFData data = io::parse_bnf(io::read_json(bnf_path));
      oracle::ScanOptions options;
      options.basis_size = basis_size;
      const oracle::ScanReport report = oracle::hbar_scan(v, data, k, order, hbars, options);
      emit(io::serialize_scan(report), out);
      if (!report.passed()) return kExitMismatch;
    } else if (*partition_cmd) {
      std::vector<Surd> w;
      for (const auto& text : omegas) w.push_back(Surd::parse(text));
      spectrum::PartitionReport report;
      if (!spectrum_path.empty()) {
        const spectrum::SpectralDataset ds = io::parse_spectrum(io::read_json(spectrum_path));
        report = spectrum::partition_identity_check(inverse::extract_e0_e1(ds).mu, w, zs);
      } else {
        if (levels <= 0) throw Error(ErrorCode::kInvalidInput, "--levels or --spectrum is required");
        report = spectrum::partition_identity_check(w, Surd::parse(e1), levels, zs);
      }
      emit(io::serialize_partition(report), out);
      if (!report.passed()) return kExitMismatch;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::kNotConverged ? kExitNotConverged : kExitValidation;
  }
  return 0;
}
