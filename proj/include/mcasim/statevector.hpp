#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mcasim/pauli.hpp"

namespace mcasim {

// Dense amplitude vector for an n-qubit register, n <= 24.
// Gates mutate the vector in place; a StateVector must stay confined to one
// execution context at a time.
struct StateVector {
    int qubit_count = 0;
    std::vector<std::complex<double>> amps;

    std::size_t dim() const { return amps.size(); }
};

// |0...0> on `qubit_count` qubits.
StateVector init_state(int qubit_count);

// RY(theta) = exp(-i theta Y / 2) on one qubit.
void apply_ry(StateVector& state, int qubit, double theta);

// RZ(phi) = exp(-i phi Z / 2) on one qubit.
void apply_rz(StateVector& state, int qubit, double phi);

double norm_sq(const StateVector& state);

// <state| P |state> for a single Pauli string. The imaginary residue is
// asserted below 1e-12 and dropped.
double expectation(const StateVector& state, const PauliString& p);

// Coefficient-weighted sum of string expectations, in meV.
double expectation(const StateVector& state, const WeightedPauliSum& op);

// Shot-based estimator: each term's measurement distribution (eigenvalues +-1
// with probabilities (1 +- <P>)/2) is sampled `shots` times; terms are treated
// independently. Deterministic for a fixed seed.
double sample_expectation(const StateVector& state, const WeightedPauliSum& op,
                          long shots, std::uint64_t seed);

}  // namespace mcasim
