#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// defining formulas literally and are only used by tests and benchmarks.

#include <vector>

#include "birkhoff/weyl.hpp"

namespace birkhoff::reference {

// sum_k (i hbar/2)^k / k! Pi^k(f, g), with Pi^k built by applying
// Pi = sum_j d_{x_j} (x) d_{xi_j} - d_{xi_j} (x) d_{x_j} k times.
weyl::FormalSymbol moyal_star(const weyl::FormalSymbol& f, const weyl::FormalSymbol& g);

// Row-major dense Hamiltonian 1/2 p^2 + V(x) in the oscillator basis,
// assembled one matrix element at a time from ladder-operator actions.
std::vector<double> hamiltonian_matrix_1d(const std::vector<double>& potential,
                                          double hbar, double omega, int size);

}  // namespace birkhoff::reference
