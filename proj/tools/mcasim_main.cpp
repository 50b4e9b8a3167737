#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcasim/config.hpp"
#include "mcasim/errors.hpp"
#include "mcasim/model.hpp"
#include "mcasim/observables.hpp"
#include "mcasim/oracle.hpp"
#include "mcasim/run.hpp"
#include "mcasim/solver.hpp"
#include "mcasim/statevector.hpp"

namespace {

using namespace mcasim;

struct Overrides {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool threads_set = false;
    std::string output_dir;
};

void apply_overrides(RunConfig& config, const Overrides& o) {
    if (o.seed_set) config.optimizer.seed = o.seed;
    if (o.threads_set) config.optimizer.threads = o.threads;
    if (!o.output_dir.empty()) config.output_dir = o.output_dir;
}

int cmd_sweep(const std::string& path, const Overrides& overrides) {
    RunConfig config = parse_config(path);
    apply_overrides(config, overrides);
    config.validate();
    return run(config);
}

int cmd_ground_state(const std::string& config_path, double tesla, double alpha_deg,
                     const std::string& axis, const Overrides& overrides) {
    RunConfig config;
    if (!config_path.empty()) config = parse_config(config_path);
    apply_overrides(config, overrides);

    FieldSpec field;
    field.magnitude = tesla;
    if (axis == "a") field.plane = FieldPlane::fixed_a;
    else if (axis == "b") field.plane = FieldPlane::fixed_b;
    else if (axis == "c") field.plane = FieldPlane::fixed_c;
    else if (axis == "bc") {
        field.plane = FieldPlane::bc;
        field.alpha_h = alpha_deg * 3.14159265358979323846 / 180.0;
    } else {
        throw usage_error("ground-state: axis must be one of a, b, c, bc");
    }

    const OptimizationResult result = optimize_ground_state(config.model, field, config.optimizer);
    const EnergyBreakdown e = energy_breakdown(config.model, field, result.best);
    const MagnetizationRecord record = magnetization(result, config.model, field);

    std::printf("ground state at H = %.6f T (axis %s", tesla, axis.c_str());
    if (axis == "bc") std::printf(", alpha_H = %.3f deg", alpha_deg);
    std::printf(")\n");
    std::printf("  winning seed        %s\n", result.start_label.c_str());
    std::printf("  objective evals     %ld\n", result.evals);
    std::printf("  energies, 4-site totals (meV)\n");
    std::printf("    %-16s %18.10f\n", "e_j1", e.e_j1);
    std::printf("    %-16s %18.10f\n", "e_j1p", e.e_j1p);
    std::printf("    %-16s %18.10f\n", "e_j2", e.e_j2);
    std::printf("    %-16s %18.10f\n", "e_j2p", e.e_j2p);
    std::printf("    %-16s %18.10f\n", "exchange total", e.exchange());
    std::printf("    %-16s %18.10f\n", "e_zeeman", e.e_zeeman);
    std::printf("    %-16s %18.10f\n", "e_mca", e.e_mca);
    std::printf("    %-16s %18.10f\n", "total", e.total);
    std::printf("  per-site mca (meV)  %18.10f\n", e.e_mca / 4.0);
    std::printf("  site directions (a, b, c) and moment (mu_B)\n");
    for (int n = 0; n < 4; ++n) {
        const auto m = record.per_site[static_cast<std::size_t>(n)];
        std::printf("    site %d   %12.8f %12.8f %12.8f\n", n + 1, m[0], m[1], m[2]);
    }
    std::printf("    average  %12.8f %12.8f %12.8f\n", record.m_avg[0], record.m_avg[1],
                record.m_avg[2]);
    return 0;
}

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

int cmd_oracle_check(bool full, std::uint64_t seed, int threads) {
    int failures = 0;
    auto report = [&failures](bool ok, const std::string& what) {
        std::printf("%s: %s\n", ok ? "ok" : "FAIL", what.c_str());
        if (!ok) ++failures;
    };
    const ModelParams defaults = ModelParams::defaults();
    OptimizerConfig opt;
    opt.threads = threads;
    const GridSpec grid;
    char buf[160];

    {
        FieldSpec zero;
        zero.plane = FieldPlane::fixed_b;
        const auto g = grid_minimize(defaults, zero, grid);
        const auto s = optimize_ground_state(defaults, zero, opt);
        std::snprintf(buf, sizeof(buf),
                      "zero-field grid %.9f vs solver %.9f (|diff| %.2e)", g.energy, s.energy,
                      std::abs(g.energy - s.energy));
        report(std::abs(g.energy - s.energy) <= 1e-5 &&
                   std::abs(g.energy - (-38.30592)) <= 1e-4,
               buf);
    }
    {
        FieldSpec below, above;
        below.plane = above.plane = FieldPlane::fixed_b;
        below.magnitude = 1.15;
        above.magnitude = 1.30;
        const auto gb = grid_minimize(defaults, below, grid);
        const auto ga = grid_minimize(defaults, above, grid);
        bool ok = true;
        for (int n = 0; n < 4; ++n) {
            ok = ok && std::abs(gb.best.bloch(n)[1]) > 0.99;
            ok = ok && std::abs(ga.best.bloch(n)[0]) > 0.99;
        }
        std::snprintf(buf, sizeof(buf), "branch switch across the spin flop (1.15 T / 1.30 T)");
        report(ok, buf);
    }
    {
        std::mt19937_64 gen(seed);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            FieldSpec f;
            f.plane = FieldPlane::bc;
            f.alpha_h = (uniform01(gen) - 0.5) * 2.0 * 3.14159265358979323846;
            f.magnitude = 5.0 * uniform01(gen);
            const auto op = build_hamiltonian(defaults, AppliedField::from(f));
            worst = std::max(worst, dense_crosscheck(op, 20, seed + 100 + (std::uint64_t)i));
        }
        std::snprintf(buf, sizeof(buf),
                      "dense crosscheck over 10 random fields (worst %.2e)", worst);
        report(worst <= 1e-10, buf);
    }
    {
        const auto h2 = analytic_saturation_field(defaults);
        std::snprintf(buf, sizeof(buf), "analytic saturation field %.4f T", h2.tesla);
        report(h2.has_barrier && std::abs(h2.tesla - 305.1154984574976) <= 1e-9, buf);
    }

    if (full) {
        // Couplings jittered by +-10%, five fields spanning every phase the
        // model reaches: chain, near-flop, flopped, high-field canted, and
        // the half-saturated window (which survives the jitter range).
        const double fields_T[] = {0.5, 1.5, 3.5, 150.0, 250.0};
        std::mt19937_64 gen(seed + 17);
        double worst = 0.0;
        int bad_cells = 0;
        for (int trial = 0; trial < 20; ++trial) {
            ModelParams p = defaults;
            auto jitter = [&gen](double& x) { x *= 0.9 + 0.2 * uniform01(gen); };
            jitter(p.j1);
            jitter(p.j1p);
            jitter(p.j2);
            jitter(p.j2p);
            jitter(p.ka);
            jitter(p.kb);
            jitter(p.kc);
            for (double h : fields_T) {
                FieldSpec f;
                f.plane = FieldPlane::fixed_b;
                f.magnitude = h;
                const auto g = grid_minimize(p, f, grid);
                const auto s = optimize_ground_state(p, f, opt);
                const double diff = std::abs(g.energy - s.energy);
                worst = std::max(worst, diff);
                if (diff > 1e-5) {
                    ++bad_cells;
                    std::printf("  disagreement: trial %d, H = %.1f T, grid %.9f, solver %.9f\n",
                                trial, h, g.energy, s.energy);
                }
            }
        }
        std::snprintf(buf, sizeof(buf),
                      "20-perturbation x 5-field agreement (worst %.2e, %d cells over 1e-5)",
                      worst, bad_cells);
        report(bad_cells == 0, buf);
    }

    std::printf("%s (%d check%s failed)\n", failures == 0 ? "oracle checks passed" : "oracle checks FAILED",
                failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}

int cmd_shot_demo(const std::string& config_path, long shots_flag, int reps,
                  const Overrides& overrides) {
    RunConfig config;
    if (!config_path.empty()) config = parse_config(config_path);
    apply_overrides(config, overrides);
    long shots = 10000;
    if (config.shots > 0) shots = config.shots;
    if (shots_flag > 0) shots = shots_flag;
    if (reps < 1) throw usage_error("shot-demo: reps must be >= 1");

    FieldSpec zero;
    zero.plane = FieldPlane::fixed_b;
    const OptimizationResult gs = optimize_ground_state(config.model, zero, config.optimizer);
    const StateVector state = prepare_state(gs.best);
    const AppliedField applied = AppliedField::from(zero);

    ModelParams exchange_only = config.model;
    exchange_only.ka = exchange_only.kb = exchange_only.kc = 0.0;
    ModelParams mca_only = config.model;
    mca_only.j1 = mca_only.j1p = mca_only.j2 = mca_only.j2p = 0.0;

    const WeightedPauliSum full_op = build_hamiltonian(config.model, applied);
    const WeightedPauliSum exchange_op = build_hamiltonian(exchange_only, applied);
    const WeightedPauliSum mca_op = build_hamiltonian(mca_only, applied);

    // Per-term binomial error propagation: measuring P with N shots has
    // variance (1 - <P>^2)/N, scaled by the term coefficient.
    auto analytic_sigma = [&](const WeightedPauliSum& op) {
        double var = 0.0;
        for (const PauliTerm& term : op.terms) {
            const double p = expectation(state, term.string);
            var += term.coeff * term.coeff * std::max(0.0, 1.0 - p * p);
        }
        return std::sqrt(var / static_cast<double>(shots));
    };

    const double exact_ex = expectation(state, exchange_op);
    const double exact_mca = expectation(state, mca_op);
    const double exact_total = expectation(state, full_op);
    const double sigma_ex = analytic_sigma(exchange_op);
    const double sigma_mca = analytic_sigma(mca_op);
    const double sigma_total = analytic_sigma(full_op);

    std::printf("shot-noise demo: %ld shots per term at the zero-field ground state\n", shots);
    std::printf("  %-10s %16s %14s %22s\n", "subtotal", "exact (meV)", "sigma (meV)",
                "|signal| / sigma_total");
    std::printf("  %-10s %16.6f %14.3e %22.4f\n", "exchange", exact_ex, sigma_ex,
                std::abs(exact_ex) / sigma_total);
    std::printf("  %-10s %16.6f %14.3e %22.4f\n", "mca", exact_mca, sigma_mca,
                std::abs(exact_mca) / sigma_total);
    std::printf("  %-10s %16.6f %14.3e %22s\n", "total", exact_total, sigma_total, "");
    std::printf("  the mca signal sits %.4fx below the energy-measurement noise floor\n",
                sigma_total / std::max(std::abs(exact_mca), 1e-300));

    int mca_hidden = 0, ex_within = 0;
    const std::uint64_t base = overrides.seed_set ? overrides.seed : config.optimizer.seed;
    for (int k = 0; k < reps; ++k) {
        const double mca_est =
            sample_expectation(state, mca_op, shots, base + 2ull * (std::uint64_t)k);
        const double ex_est =
            sample_expectation(state, exchange_op, shots, base + 2ull * (std::uint64_t)k + 1ull);
        if (std::abs(mca_est) < 3.0 * sigma_total) ++mca_hidden;
        if (std::abs(ex_est - exact_ex) < 3.0 * sigma_total) ++ex_within;
    }
    std::printf("repetitions: %d\n", reps);
    std::printf("  |mca estimate| < 3 sigma_total:        %d/%d\n", mca_hidden, reps);
    std::printf("  |exchange - exact| < 3 sigma_total:    %d/%d\n", ex_within, reps);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // The shipped defaults encode the fitted anisotropy-to-exchange hierarchy;
    // a drifted constant would silently rescale every MCA result.
    {
        const ModelParams d = ModelParams::defaults();
        const double ratio = d.kb / std::abs(d.j1);
        if (std::abs(ratio - 2.205e-6) > 5e-10) {
            std::fprintf(stderr, "startup assertion failed: kb/|j1| = %.6e, expected 2.205e-6\n",
                         ratio);
            return 1;
        }
    }

    CLI::App app{"Variational ground states and anisotropy observables for a 4-site "
                 "frustrated antiferromagnet"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string config_path, gs_config, sd_config;
    double gs_field = 0.0, gs_alpha = 0.0;
    std::string gs_axis = "b";
    bool oc_full = false;
    long sd_shots = 0;
    int sd_reps = 100;

    CLI::App* sweep = app.add_subcommand("sweep", "Run a configured sweep and write CSV artifacts");
    sweep->add_option("config", config_path, "Path to the run configuration")->required();

    CLI::App* ground = app.add_subcommand("ground-state", "Solve a single field point");
    ground->add_option("config", gs_config, "Optional run configuration for model/optimizer");
    ground->add_option("--field", gs_field, "Field magnitude in tesla");
    ground->add_option("--alpha", gs_alpha, "Field angle from b toward c, degrees (bc axis only)");
    ground->add_option("--axis", gs_axis, "Field axis: a, b, c, or bc");

    CLI::App* oracle = app.add_subcommand("oracle-check", "Cross-validate solver against the grid oracle");
    oracle->add_flag("--full", oc_full, "Include the 20-perturbation x 5-field agreement matrix");

    CLI::App* shot = app.add_subcommand("shot-demo", "Shot-noise comparison of exchange vs MCA subtotals");
    shot->add_option("config", sd_config, "Optional run configuration for model/shots");
    shot->add_option("--shots", sd_shots, "Shots per Pauli term (overrides config)");
    shot->add_option("--reps", sd_reps, "Seeded repetitions for the coverage statistic");

    for (CLI::App* sub : {sweep, ground, oracle, shot}) {
        sub->add_option("--seed", overrides.seed, "Override the optimizer seed")
            ->each([&overrides](const std::string&) { overrides.seed_set = true; });
        sub->add_option("--threads", overrides.threads, "Override the worker thread count")
            ->each([&overrides](const std::string&) { overrides.threads_set = true; });
    }
    sweep->add_option("--output-dir", overrides.output_dir, "Override the artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(config_path, overrides);
        if (ground->parsed())
            return cmd_ground_state(gs_config, gs_field, gs_alpha, gs_axis, overrides);
        if (oracle->parsed())
            return cmd_oracle_check(oc_full, overrides.seed_set ? overrides.seed : 20260814ull,
                                    overrides.threads_set ? overrides.threads : 1);
        if (shot->parsed()) return cmd_shot_demo(sd_config, sd_shots, sd_reps, overrides);
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const invariant_error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
