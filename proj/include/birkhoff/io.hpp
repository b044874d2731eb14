#pragma once

// JSON documents for Hamiltonians, BNF data and spectral datasets. Exact
// values travel as strings in the scalars text form; failures are reported
// as SCHEMA_ERROR with a JSON pointer to the offending field.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "birkhoff/bnf.hpp"
#include "birkhoff/oracle.hpp"
#include "birkhoff/resonant.hpp"
#include "birkhoff/spectrum.hpp"

namespace birkhoff::io {

using Json = nlohmann::ordered_json;

// {dim, omegas[], E0, E1, taylor: [{hbar, x[], xi[], coeff}]}. The taylor
// list holds the terms of graded degree >= 3; the quadratic part is rebuilt
// from omegas. coeff is a scalar string or {re, im}. Terms beyond the
// truncation are dropped.
bnf::HamiltonianInput parse_hamiltonian(const Json& doc, int truncation);
Json serialize_hamiltonian(const bnf::HamiltonianInput& h);

// Smallest even truncation >= 4 covering every taylor term of the document.
int natural_truncation(const Json& doc);

// {dim, omegas[], E0, E1, coeffs: [{l, alpha[], c}]}
bnf::BNFData parse_bnf(const Json& doc);
Json serialize_bnf(const bnf::BNFData& data);

// {dim?, order, levels: [{N, a[]}]} with N = 1, 2, ... in order.
spectrum::SpectralDataset parse_spectrum(const Json& doc);
Json serialize_spectrum(const spectrum::SpectralDataset& data);

// {dim, coeffs: [{x[], c}]} with c a decimal string or number.
oracle::PolynomialPotential parse_potential(const Json& doc);

// {N, hbar, dimension, center, eigenvalues[]} with decimal strings.
Json serialize_cluster(const resonant::ClusterSpectrum& s, int digits = 17);
Json serialize_scan(const oracle::ScanReport& r, int digits = 17);
Json serialize_partition(const spectrum::PartitionReport& r, int digits = 20);

std::string format_double(double value, int digits = 17);

Json read_json(const std::filesystem::path& path);
Json parse_json_text(const std::string& text);
// Pretty-printed, UTF-8, newline-terminated.
std::string dump(const Json& doc);
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace birkhoff::io
