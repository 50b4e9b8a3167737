#pragma once

#include "mcasim/model.hpp"
#include "mcasim/solver.hpp"

namespace mcasim {

// Exhaustive-search controls. The coarse pass walks a full product grid over
// the four site directions, so the cell count grows as (theta*phi)^4; the
// budget guards against accidentally astronomical requests.
struct GridSpec {
    int theta_steps = 12;
    int phi_steps = 12;
    int refine_iters = 20;
    double refine_shrink = 0.5;
    double max_cells = 1e9;

    void validate() const;
};

// Brute-force reference minimizer. Completely independent of the variational
// solver: product grid, top-cell basin extraction, then local grid shrinking.
OptimizationResult grid_minimize(const ModelParams& params, const FieldSpec& field,
                                 const GridSpec& grid);

// Evaluates the operator sum on random (entangled) normalized states through
// explicit dense matrices and returns the maximum relative deviation from the
// bit-mask expectation path.
double dense_crosscheck(const WeightedPauliSum& op, int trials, uint64_t seed);

struct SaturationField {
    double tesla = 0.0;
    // False when the couplings provide no antiferromagnetic barrier, in which
    // case tesla is 0 and saturation is immediate.
    bool has_barrier = true;
};

// Closed-form saturation threshold of the symmetric two-sublattice tilt
// energy: H2 = s*((j1 + j1p) + 4*j2) / (2*g*mu_B).
SaturationField analytic_saturation_field(const ModelParams& params);

}  // namespace mcasim
