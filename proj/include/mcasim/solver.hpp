#pragma once

#include <string>
#include <vector>

#include "mcasim/model.hpp"
#include "mcasim/nelder_mead.hpp"
#include "mcasim/statevector.hpp"

namespace mcasim {

struct OptimizationResult {
    AnsatzParams best;
    double energy = 0.0;        // meV
    long evals = 0;             // objective evaluations across all starts
    bool converged = false;
    std::string start_label;    // which seed produced the winner
};

// The tied 8-qubit product state: RY(theta_n) RZ(phi_n) on system qubit n and
// identically on its ancilla n+4.
StateVector prepare_state(const AnsatzParams& angles);

// Multi-start ground-state search. Starts from the named physical seeds
// (b-axis chain, a-axis flop, field-aligned), n_restarts random points, and
// any caller-provided seeds. Every accepted optimum is re-evaluated through
// the statevector path and must agree with the closed form to 1e-10 relative.
OptimizationResult optimize_ground_state(const ModelParams& params, const AppliedField& field,
                                         const OptimizerConfig& config,
                                         const std::vector<AnsatzParams>& extra_seeds = {});
OptimizationResult optimize_ground_state(const ModelParams& params, const FieldSpec& field,
                                         const OptimizerConfig& config,
                                         const std::vector<AnsatzParams>& extra_seeds = {});

// Ordered sweep: the first point runs the full multi-start; later points seed
// from the previous optimum plus the named seeds, so first-order branch
// crossings are re-contested at every field instead of being tracked
// hysteretically.
std::vector<OptimizationResult> warm_start_sweep(const ModelParams& params,
                                                 const std::vector<FieldSpec>& fields,
                                                 const OptimizerConfig& config);

// Named seed constructors, exposed for tests and the oracle paths.
AnsatzParams seed_chain_b();
AnsatzParams seed_flop_a();
AnsatzParams seed_field_aligned(const AppliedField& field);

}  // namespace mcasim
