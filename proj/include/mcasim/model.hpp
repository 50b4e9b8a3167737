#pragma once

#include <array>
#include <cstddef>

#include "mcasim/pauli.hpp"

namespace mcasim {

// Bohr magneton in meV per tesla (CODATA).
inline constexpr double kMuB = 0.05788381806;

// Coupling constants in meV, plus the Lande factor, spin magnitude, and the
// majority twin-domain population fraction. Exchange signs follow the
// convention negative = ferromagnetic.
struct ModelParams {
    double j1 = -104.30;
    double j1p = -103.13;
    double j2 = 87.18;
    double j2p = 64.87;
    double ka = 0.000012;
    double kb = 0.00023;
    double kc = 0.00010;
    double g = 2.0;
    double s = 0.5;
    double twin_fraction = 0.8;

    static ModelParams defaults() { return ModelParams{}; }
    void validate() const;
};

enum class FieldPlane { bc, fixed_b, fixed_a, fixed_c };

// Applied field: magnitude in tesla plus either a rotation angle in the bc
// plane (measured from b toward c) or a fixed lab axis.
struct FieldSpec {
    double magnitude = 0.0;  // tesla
    double alpha_h = 0.0;    // radians, used only when plane == bc
    FieldPlane plane = FieldPlane::fixed_b;

    void validate() const;
    // Unit vector of the field direction in crystal (a, b, c) coordinates.
    std::array<double, 3> unit_vector() const;
};

// Internal general-direction form of FieldSpec. Twin re-optimization rotates
// the lab field out of the bc plane, which the public enum cannot express.
struct AppliedField {
    double tesla = 0.0;
    std::array<double, 3> u{0.0, 1.0, 0.0};  // unit direction, (a, b, c)

    static AppliedField from(const FieldSpec& f) { return {f.magnitude, f.unit_vector()}; }
};

// Free variational angles for the four system sites; the ansatz ties each
// ancilla to its system qubit, so these eight numbers define the full state.
struct AnsatzParams {
    std::array<double, 4> theta{};
    std::array<double, 4> phi{};

    // Bloch vector of site n: (sin t cos p, sin t sin p, cos t).
    std::array<double, 3> bloch(std::size_t n) const;

    std::array<double, 8> flat() const;
    static AnsatzParams from_flat(const std::array<double, 8>& x);

    // Map theta into [0, pi] and phi into (-pi, pi] without moving the
    // Bloch vectors.
    AnsatzParams canonical() const;
};

struct EnergyBreakdown {
    double e_j1 = 0.0;
    double e_j1p = 0.0;
    double e_j2 = 0.0;
    double e_j2p = 0.0;
    double e_zeeman = 0.0;
    double e_mca = 0.0;
    double total = 0.0;

    double exchange() const { return e_j1 + e_j1p + e_j2 + e_j2p; }
    // Same decomposition divided by the four sites.
    EnergyBreakdown per_site() const;
};

// Pauli Hamiltonian over 8 qubits: system sites 1..4 on qubits 0..3, their
// ancillas on qubits 4..7. Zero-coefficient Zeeman components are omitted.
WeightedPauliSum build_hamiltonian(const ModelParams& params, const AppliedField& field);
WeightedPauliSum build_hamiltonian(const ModelParams& params, const FieldSpec& field);

// Closed-form expectation of the Hamiltonian on the tied product ansatz.
double classical_energy(const ModelParams& params, const AppliedField& field,
                        const AnsatzParams& angles);
double classical_energy(const ModelParams& params, const FieldSpec& field,
                        const AnsatzParams& angles);

// Analytic gradient of classical_energy: (dE/dtheta_1..4, dE/dphi_1..4).
std::array<double, 8> classical_gradient(const ModelParams& params, const AppliedField& field,
                                         const AnsatzParams& angles);
std::array<double, 8> classical_gradient(const ModelParams& params, const FieldSpec& field,
                                         const AnsatzParams& angles);

EnergyBreakdown energy_breakdown(const ModelParams& params, const AppliedField& field,
                                 const AnsatzParams& angles);
EnergyBreakdown energy_breakdown(const ModelParams& params, const FieldSpec& field,
                                 const AnsatzParams& angles);

}  // namespace mcasim
