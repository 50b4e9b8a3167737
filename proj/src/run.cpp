#include "mcasim/run.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

#include <json.hpp>

#include "mcasim/errors.hpp"
#include "mcasim/svg_plot.hpp"

namespace mcasim {
namespace {

constexpr double kPi = 3.14159265358979323846;

FieldSpec field_at(const RunConfig& config, double value) {
    FieldSpec f;
    switch (config.kind) {
        case SweepKind::field_b:
        case SweepKind::high_field:
            f.magnitude = value;
            f.plane = FieldPlane::fixed_b;
            break;
        case SweepKind::field_a:
            f.magnitude = value;
            f.plane = FieldPlane::fixed_a;
            break;
        case SweepKind::field_c:
            f.magnitude = value;
            f.plane = FieldPlane::fixed_c;
            break;
        case SweepKind::angle_bc:
            f.magnitude = config.fixed_magnitude;
            f.alpha_h = value * kPi / 180.0;
            f.plane = FieldPlane::bc;
            break;
    }
    return f;
}

// Independent multi-starts per point, distributed across threads. Each point
// computes exactly what a sequential cold run would, so the outcome does not
// depend on scheduling.
std::vector<OptimizationResult> cold_sweep(const ModelParams& params,
                                           const std::vector<FieldSpec>& fields,
                                           const OptimizerConfig& config) {
    std::vector<OptimizationResult> results(fields.size());
    OptimizerConfig point_config = config;
    point_config.threads = 1;
    const int workers =
        static_cast<int>(std::min<std::size_t>(std::max(config.threads, 1), fields.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            results[i] = optimize_ground_state(params, fields[i], point_config);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.push_back(std::async(std::launch::async, [&]() {
            for (std::size_t i = next.fetch_add(1); i < fields.size(); i = next.fetch_add(1))
                results[i] = optimize_ground_state(params, fields[i], point_config);
        }));
    for (auto& f : pool) f.get();
    return results;
}

}  // namespace

std::vector<FieldSpec> sweep_fields(const RunConfig& config) {
    config.validate();
    // Inclusive range; the epsilon absorbs accumulated representation error
    // so that stop itself is always emitted.
    const long count = static_cast<long>(
        std::floor((config.stop - config.start) / config.step + 1e-9));
    std::vector<FieldSpec> fields;
    fields.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i)
        fields.push_back(field_at(config, config.start + static_cast<double>(i) * config.step));
    return fields;
}

SweepOutcome run_sweep(const RunConfig& config) {
    const std::vector<FieldSpec> fields = sweep_fields(config);
    const std::vector<OptimizationResult> results =
        config.warm_start ? warm_start_sweep(config.model, fields, config.optimizer)
                          : cold_sweep(config.model, fields, config.optimizer);

    SweepOutcome out;
    out.rows.reserve(fields.size());
    out.majority.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i)
        out.majority.push_back(magnetization(results[i], config.model, fields[i]));

    for (std::size_t i = 0; i < fields.size(); ++i) {
        const MagnetizationRecord record =
            config.twins ? mix_twins(out.majority[i], config.model, config.optimizer)
                         : out.majority[i];
        const EnergyBreakdown e = energy_breakdown(config.model, fields[i], results[i].best);

        SweepRow row;
        row.field_T = fields[i].magnitude;
        row.alpha_deg =
            config.kind == SweepKind::angle_bc ? fields[i].alpha_h * 180.0 / kPi : 0.0;
        row.m_muB = record.m_avg;
        for (int n = 0; n < 4; ++n) row.y[static_cast<std::size_t>(n)] = record.per_site[n][1];
        row.e_j1 = e.e_j1;
        row.e_j1p = e.e_j1p;
        row.e_j2 = e.e_j2;
        row.e_j2p = e.e_j2p;
        row.e_zeeman = e.e_zeeman;
        row.e_mca = e.e_mca;
        row.e_total = e.total;
        row.e_mca_per_site = e.e_mca / 4.0;
        row.tau_muB_T = config.kind == SweepKind::angle_bc
                            ? torque(record).tau_a
                            : torque_a_component(record.m_avg, fields[i].magnitude,
                                                 fields[i].unit_vector());
        row.phase = classify_phase(out.majority[i]);
        row.converged = results[i].converged;
        out.all_converged = out.all_converged && results[i].converged;
        out.rows.push_back(std::move(row));
    }

    if (config.kind == SweepKind::angle_bc) {
        // Constant magnitude: transition fields are undefined, labels remain.
        for (const MagnetizationRecord& r : out.majority)
            out.report.phase_labels.push_back(classify_phase(r));
    } else {
        out.report = detect_transitions(out.majority);
    }
    return out;
}

int run(const RunConfig& config) {
    const SweepOutcome outcome = run_sweep(config);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
        throw config_error("run: cannot create output directory '" + config.output_dir + "': " +
                           ec.message());
    const std::string base = config.output_dir + "/" + to_string(config.kind);

    emit_csv(outcome.rows, base + ".csv");

    nlohmann::json report;
    report["sweep"] = to_string(config.kind);
    report["start"] = config.start;
    report["stop"] = config.stop;
    report["step"] = config.step;
    report["h_flop"] =
        outcome.report.h_flop ? nlohmann::json(*outcome.report.h_flop) : nlohmann::json();
    report["h1"] = outcome.report.h1 ? nlohmann::json(*outcome.report.h1) : nlohmann::json();
    report["h2"] = outcome.report.h2 ? nlohmann::json(*outcome.report.h2) : nlohmann::json();
    report["phase_labels"] = outcome.report.phase_labels;
    {
        const std::string path = config.output_dir + "/phase_report.json";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw config_error("run: cannot open '" + path + "' for writing");
        out << report.dump(2) << '\n';
    }

    if (config.emit_plots) {
        PlotLayout layout;
        std::vector<PlotSeries> series;
        if (config.kind == SweepKind::angle_bc) {
            layout.title = "Torque vs field angle, " + std::to_string(config.fixed_magnitude) +
                           " T in the bc plane";
            layout.x_label = "alpha_H (deg)";
            layout.y_label = "tau_a (mu_B T)";
            PlotSeries tau{"tau_a", {}, {}};
            for (const SweepRow& r : outcome.rows) {
                tau.x.push_back(r.alpha_deg);
                tau.y.push_back(r.tau_muB_T);
            }
            series.push_back(std::move(tau));
        } else {
            layout.title = "Magnetization vs field (" + to_string(config.kind) + ")";
            layout.x_label = "H (T)";
            layout.y_label = "M (mu_B / site)";
            const char* names[3] = {"M_a", "M_b", "M_c"};
            for (int k = 0; k < 3; ++k) {
                PlotSeries s{names[k], {}, {}};
                for (const SweepRow& r : outcome.rows) {
                    s.x.push_back(r.field_T);
                    s.y.push_back(r.m_muB[static_cast<std::size_t>(k)]);
                }
                series.push_back(std::move(s));
            }
        }
        write_line_plot(base + ".svg", layout, series);
    }

    return outcome.all_converged ? 0 : 3;
}

}  // namespace mcasim
