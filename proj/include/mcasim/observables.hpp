#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mcasim/model.hpp"
#include "mcasim/solver.hpp"

namespace mcasim {

// Laboratory-frame observables at one optimized field point. Per-site entries
// are dimensionless Bloch directions; the site average carries the g*s scale,
// so a fully aligned lattice reads 1 mu_B per site.
struct MagnetizationRecord {
    FieldSpec field;
    std::array<std::array<double, 3>, 4> per_site{};
    std::array<double, 3> m_avg{};
};

struct TorqueRecord {
    double alpha_h = 0.0;  // radians
    double tau_a = 0.0;    // mu_B * T per site
};

// Transition fields extracted from a magnitude sweep. An absent entry means
// the sweep never crossed that boundary.
struct PhaseReport {
    std::optional<double> h_flop;
    std::optional<double> h1;
    std::optional<double> h2;
    std::vector<std::string> phase_labels;
};

MagnetizationRecord magnetization(const OptimizationResult& result, const ModelParams& params,
                                  const FieldSpec& field);

// a-component of M x H in mu_B * T, defined for any field direction.
double torque_a_component(const std::array<double, 3>& m_avg, double tesla,
                          const std::array<double, 3>& u);

// Torque about the rotation axis of a bc-plane field scan. Any other field
// plane is a caller mistake.
TorqueRecord torque(const MagnetizationRecord& record);

// Moments of an 80/20-style twin-domain mixture. The minor twin has its a and
// b axes swapped relative to the lab frame, so its contribution comes from an
// independent optimization under the correspondingly rotated field.
MagnetizationRecord mix_twins(const MagnetizationRecord& majority, const ModelParams& params,
                              const OptimizerConfig& config);

// One of: afm_chain, spin_flop, half_saturated, saturated, other.
std::string classify_phase(const MagnetizationRecord& record, double eps = 1e-3);

PhaseReport detect_transitions(const std::vector<MagnetizationRecord>& sweep, double eps = 1e-3);

}  // namespace mcasim
