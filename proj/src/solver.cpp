#include "mcasim/solver.hpp"

#include <cmath>
#include <future>
#include <random>

#include "mcasim/errors.hpp"

namespace mcasim {

namespace {

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Seed {
    AnsatzParams angles;
    std::string label;
};

std::vector<Seed> build_seeds(const AppliedField& field, const OptimizerConfig& config,
                              const std::vector<AnsatzParams>& extra, bool with_randoms) {
    std::vector<Seed> seeds;
    seeds.push_back({seed_chain_b(), "b_chain"});
    seeds.push_back({seed_flop_a(), "a_flop"});
    seeds.push_back({seed_field_aligned(field), "field_aligned"});
    if (with_randoms) {
        std::mt19937_64 gen(config.seed);
        for (int r = 0; r < config.n_restarts; ++r) {
            AnsatzParams a;
            for (int n = 0; n < 4; ++n) {
                a.theta[n] = std::acos(1.0 - 2.0 * uniform01(gen));
                a.phi[n] = M_PI * (2.0 * uniform01(gen) - 1.0);
            }
            seeds.push_back({a, "restart_" + std::to_string(r)});
        }
    }
    for (std::size_t i = 0; i < extra.size(); ++i)
        seeds.push_back({extra[i], i == 0 && !with_randoms ? "warm" : "caller_" + std::to_string(i)});
    return seeds;
}

// Nelder-Mead parks within roughly its x tolerance of the minimum. A short
// backtracking descent along the analytic gradient pushes the stiff
// (exchange-scale) directions down to machine precision, which is what makes
// symmetry-protected zeros such as the torque at 0 and 90 degrees come out
// clean instead of carrying 1e-8-sized simplex residue.
double polish(const ModelParams& params, const AppliedField& field, AnsatzParams& angles,
              double energy) {
    double step = 1.0 / 1024.0;
    for (int it = 0; it < 400; ++it) {
        const auto grad = classical_gradient(params, field, angles);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax == 0.0) break;
        // Keep individual moves below 0.05 rad so the descent cannot hop out
        // of the basin the multi-start reduction selected.
        step = std::min(step, 0.05 / gmax);
        auto flat = angles.flat();
        bool moved = false;
        while (step > 1e-18) {
            std::array<double, 8> trial{};
            for (int d = 0; d < 8; ++d) trial[d] = flat[d] - step * grad[d];
            const AnsatzParams cand = AnsatzParams::from_flat(trial);
            const double ec = classical_energy(params, field, cand);
            if (ec < energy) {
                angles = cand;
                energy = ec;
                step *= 2.0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    // Near the minimum the remaining energy differences drop below the
    // floating-point resolution of the total while the analytic gradient is
    // still orders of magnitude above its own noise floor. Finish with
    // Polak-Ribiere conjugate gradients; plain descent zigzags for hundreds
    // of steps here because the Hessian mixes exchange-stiff and
    // anisotropy-soft directions. Step sizes come from a differenced
    // directional curvature, never from energy comparisons.
    auto flat = angles.flat();
    auto grad = classical_gradient(params, field, angles);
    std::array<double, 8> dir{};
    for (int d = 0; d < 8; ++d) dir[d] = -grad[d];
    for (int it = 0; it < 100; ++it) {
        double gmax = 0.0, gd = 0.0, dmax = 0.0;
        for (int d = 0; d < 8; ++d) {
            gmax = std::max(gmax, std::abs(grad[d]));
            dmax = std::max(dmax, std::abs(dir[d]));
            gd += grad[d] * dir[d];
        }
        if (gmax < 1e-12 || dmax == 0.0 || gd >= 0.0) break;
        const double probe = 1e-7 / dmax;
        std::array<double, 8> shifted{};
        for (int d = 0; d < 8; ++d) shifted[d] = flat[d] + probe * dir[d];
        const auto grad_probe = classical_gradient(params, field, AnsatzParams::from_flat(shifted));
        double curv = 0.0;
        for (int d = 0; d < 8; ++d) curv += (grad_probe[d] - grad[d]) * dir[d];
        curv /= probe;
        if (curv <= 0.0) break;
        const double t = std::min(-gd / curv, 0.02 / dmax);
        for (int d = 0; d < 8; ++d) flat[d] += t * dir[d];
        const auto grad_next = classical_gradient(params, field, AnsatzParams::from_flat(flat));
        double num = 0.0, den = 0.0;
        for (int d = 0; d < 8; ++d) {
            num += grad_next[d] * (grad_next[d] - grad[d]);
            den += grad[d] * grad[d];
        }
        const double beta = (it % 10 == 9) ? 0.0 : std::max(0.0, num / den);
        for (int d = 0; d < 8; ++d) dir[d] = -grad_next[d] + beta * dir[d];
        grad = grad_next;
    }
    angles = AnsatzParams::from_flat(flat);
    return classical_energy(params, field, angles);
}

OptimizationResult optimize_impl(const ModelParams& params, const AppliedField& field,
                                 const OptimizerConfig& config,
                                 const std::vector<AnsatzParams>& extra, bool with_randoms) {
    params.validate();
    config.validate();

    const auto seeds = build_seeds(field, config, extra, with_randoms);
    auto objective = [&](const std::vector<double>& x) {
        AnsatzParams a;
        for (int n = 0; n < 4; ++n) {
            a.theta[n] = x[n];
            a.phi[n] = x[4 + n];
        }
        return classical_energy(params, field, a);
    };

    auto descend = [&](const Seed& s) {
        const auto flat = s.angles.flat();
        return nelder_mead(objective, std::vector<double>(flat.begin(), flat.end()), config);
    };

    std::vector<NelderMeadResult> runs(seeds.size());
    if (config.threads > 1) {
        std::vector<std::future<NelderMeadResult>> futs;
        futs.reserve(seeds.size());
        for (const auto& s : seeds)
            futs.push_back(std::async(std::launch::async, [&descend, &s] { return descend(s); }));
        for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < seeds.size(); ++i) runs[i] = descend(seeds[i]);
    }

    // Deterministic reduction: strict improvement only, so ties resolve to the
    // earliest seed regardless of scheduling.
    std::size_t win = 0;
    long total_evals = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        total_evals += runs[i].evals;
        if (runs[i].f < runs[win].f) win = i;
    }

    OptimizationResult out;
    std::array<double, 8> xb{};
    for (int d = 0; d < 8; ++d) xb[d] = runs[win].x[d];
    AnsatzParams best = AnsatzParams::from_flat(xb);
    out.energy = polish(params, field, best, runs[win].f);
    out.best = best.canonical();
    out.evals = total_evals;
    out.converged = runs[win].converged;
    out.start_label = seeds[win].label;

    // Verification mode: the production objective is the closed form; every
    // accepted optimum must reproduce through the actual statevector path.
    const double e_quantum = expectation(prepare_state(out.best), build_hamiltonian(params, field));
    if (std::abs(e_quantum - out.energy) > 1e-10 * std::max(1.0, std::abs(out.energy)))
        throw invariant_error("optimize_ground_state: statevector and closed-form energies diverge");

    return out;
}

}  // namespace

StateVector prepare_state(const AnsatzParams& angles) {
    StateVector s = init_state(8);
    for (int n = 0; n < 4; ++n) {
        apply_ry(s, n, angles.theta[n]);
        apply_rz(s, n, angles.phi[n]);
        apply_ry(s, n + 4, angles.theta[n]);
        apply_rz(s, n + 4, angles.phi[n]);
    }
    return s;
}

AnsatzParams seed_chain_b() {
    AnsatzParams a;
    a.theta = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    a.phi = {M_PI / 2, M_PI / 2, -M_PI / 2, -M_PI / 2};
    return a;
}

AnsatzParams seed_flop_a() {
    AnsatzParams a;
    a.theta = {M_PI / 2, M_PI / 2, M_PI / 2, M_PI / 2};
    a.phi = {0.0, 0.0, M_PI, M_PI};
    return a;
}

AnsatzParams seed_field_aligned(const AppliedField& field) {
    AnsatzParams a;
    const double theta = std::acos(std::max(-1.0, std::min(1.0, field.u[2])));
    const double phi = std::atan2(field.u[1], field.u[0]);
    a.theta = {theta, theta, theta, theta};
    a.phi = {phi, phi, phi, phi};
    return a;
}

OptimizationResult optimize_ground_state(const ModelParams& params, const AppliedField& field,
                                         const OptimizerConfig& config,
                                         const std::vector<AnsatzParams>& extra_seeds) {
    return optimize_impl(params, field, config, extra_seeds, true);
}

OptimizationResult optimize_ground_state(const ModelParams& params, const FieldSpec& field,
                                         const OptimizerConfig& config,
                                         const std::vector<AnsatzParams>& extra_seeds) {
    field.validate();
    return optimize_impl(params, AppliedField::from(field), config, extra_seeds, true);
}

std::vector<OptimizationResult> warm_start_sweep(const ModelParams& params,
                                                 const std::vector<FieldSpec>& fields,
                                                 const OptimizerConfig& config) {
    if (fields.empty()) throw usage_error("warm_start_sweep: empty field list");

    std::vector<OptimizationResult> results;
    results.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        fields[i].validate();
        const auto af = AppliedField::from(fields[i]);
        if (i == 0) {
            results.push_back(optimize_impl(params, af, config, {}, true));
        } else {
            results.push_back(optimize_impl(params, af, config, {results.back().best}, false));
        }
    }
    return results;
}

}  // namespace mcasim
