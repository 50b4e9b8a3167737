#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace mcasim {

// Simplex coefficients default to the classical (1, 2, 0.5, 0.5) set; the
// tolerances are tight enough to resolve anisotropy-scale (1e-4 meV) structure
// on top of ~100 meV exchange energies.
struct OptimizerConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double f_tol = 1e-12;       // meV spread across the simplex
    double x_tol = 1e-8;        // radians spread across the simplex
    long max_evals = 50000;     // per start
    int n_restarts = 8;         // random starts beyond the named seeds
    std::uint64_t seed = 20260814;  // drives restart perturbations only
    int threads = 1;            // concurrent starts (results stay deterministic)

    void validate() const;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    long evals = 0;
    bool converged = false;  // tolerance met before the evaluation budget
};

// Derivative-free simplex minimization of `objective` from `start`. The
// initial simplex offsets each coordinate by `initial_step`. Deterministic:
// no randomness is used inside a single descent.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             const std::vector<double>& start, const OptimizerConfig& config,
                             double initial_step = 0.25);

}  // namespace mcasim
