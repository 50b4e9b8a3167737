#include "mcasim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mcasim/errors.hpp"

namespace mcasim {
namespace {

// Median of |v|; returns 0 for empty input.
double abs_median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    for (double& x : v) x = std::abs(x);
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

int sign_of(double x) { return x > 0.0 ? 1 : -1; }

}  // namespace

MagnetizationRecord magnetization(const OptimizationResult& result, const ModelParams& params,
                                  const FieldSpec& field) {
    MagnetizationRecord rec;
    rec.field = field;
    for (std::size_t n = 0; n < 4; ++n) rec.per_site[n] = result.best.bloch(n);

    // The energy is even under a -> -a whenever the field has no a component
    // (every a appears squared or paired). Pin site 1 to the a >= 0 branch so
    // consecutive sweep points do not hop between mirror-image optima.
    if (field.unit_vector()[0] == 0.0 && rec.per_site[0][0] < 0.0)
        for (auto& m : rec.per_site) m[0] = -m[0];

    for (int k = 0; k < 3; ++k) {
        double mean = 0.0;
        for (const auto& m : rec.per_site) mean += m[k] / 4.0;
        rec.m_avg[k] = params.g * params.s * mean;
    }
    return rec;
}

double torque_a_component(const std::array<double, 3>& m_avg, double tesla,
                          const std::array<double, 3>& u) {
    return m_avg[1] * tesla * u[2] - m_avg[2] * tesla * u[1];
}

TorqueRecord torque(const MagnetizationRecord& record) {
    if (record.field.plane != FieldPlane::bc)
        throw usage_error("torque: record must come from a bc-plane field scan");
    return {record.field.alpha_h,
            torque_a_component(record.m_avg, record.field.magnitude, record.field.unit_vector())};
}

MagnetizationRecord mix_twins(const MagnetizationRecord& majority, const ModelParams& params,
                              const OptimizerConfig& config) {
    params.validate();
    const double f = params.twin_fraction;
    if (f == 1.0) return majority;

    // In the minor twin's crystal frame the lab field appears rotated by -90
    // degrees about c. Solve that problem, then rotate the moments back.
    const auto u = majority.field.unit_vector();
    const AppliedField rotated{majority.field.magnitude, {u[1], -u[0], u[2]}};
    const auto minor = optimize_ground_state(params, rotated, config);

    MagnetizationRecord rec = majority;
    std::array<double, 3> minor_mean{};
    for (std::size_t n = 0; n < 4; ++n) {
        const auto m = minor.best.bloch(n);
        const std::array<double, 3> lab{-m[1], m[0], m[2]};
        for (int k = 0; k < 3; ++k) {
            rec.per_site[n][k] = f * majority.per_site[n][k] + (1.0 - f) * lab[k];
            minor_mean[k] += lab[k] / 4.0;
        }
    }
    for (int k = 0; k < 3; ++k)
        rec.m_avg[k] = f * majority.m_avg[k] + (1.0 - f) * params.g * params.s * minor_mean[k];
    return rec;
}

std::string classify_phase(const MagnetizationRecord& record, double eps) {
    if (!(eps > 0.0) || !(eps < 0.1))
        throw usage_error("classify_phase: eps must lie in (0, 0.1)");

    int aligned = 0, anti = 0;
    for (const auto& m : record.per_site) {
        if (m[1] > 1.0 - eps) ++aligned;
        if (m[1] < -(1.0 - eps)) ++anti;
    }
    if (aligned == 4) return "saturated";
    // Two spins locked to the field and the other two merely tilted. A
    // staggered pair at -b is the zero-field chain, not a half-saturated
    // state, so anti-aligned sites disqualify.
    if (aligned == 2 && anti == 0) return "half_saturated";

    // Antiferromagnetic labels require a dominant axis shared by all four
    // sites and a balanced sign pattern (two up, two down).
    int axis = -1, sign_sum = 0;
    bool shared = true;
    for (const auto& m : record.per_site) {
        int k = 0;
        if (std::abs(m[1]) > std::abs(m[k])) k = 1;
        if (std::abs(m[2]) > std::abs(m[k])) k = 2;
        if (axis < 0) axis = k;
        shared = shared && (k == axis);
        sign_sum += sign_of(m[k]);
    }
    if (shared && sign_sum == 0) {
        if (axis == 0) return "spin_flop";
        if (axis == 1) return "afm_chain";
    }
    return "other";
}

PhaseReport detect_transitions(const std::vector<MagnetizationRecord>& sweep, double eps) {
    if (sweep.empty()) throw usage_error("detect_transitions: empty sweep");
    const std::size_t n = sweep.size();
    std::vector<double> h(n), mb(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = sweep[i].field.magnitude;
        mb[i] = sweep[i].m_avg[1];
        if (i > 0 && !(h[i] > h[i - 1]))
            throw usage_error("detect_transitions: sweep must be ordered by increasing field");
    }

    PhaseReport report;
    report.phase_labels.reserve(n);
    for (const auto& rec : sweep) report.phase_labels.push_back(classify_phase(rec, eps));

    for (std::size_t i = 1; i < n && !report.h_flop; ++i)
        if (report.phase_labels[i - 1] == "afm_chain" && report.phase_labels[i] == "spin_flop")
            report.h_flop = 0.5 * (h[i - 1] + h[i]);
    if (!report.h_flop && n >= 4) {
        // Label-free fallback: the flop is the one step where M_b jumps far
        // above the typical step-to-step change.
        std::vector<double> steps(n - 1);
        for (std::size_t i = 1; i < n; ++i) steps[i - 1] = mb[i] - mb[i - 1];
        const double med = abs_median(steps);
        for (std::size_t i = 1; med > 0.0 && i < n && !report.h_flop; ++i)
            if (std::abs(steps[i - 1]) > 5.0 * med && std::abs(steps[i - 1]) > 1e-6)
                report.h_flop = 0.5 * (h[i - 1] + h[i]);
    }

    bool seen_unsaturated = false;
    for (std::size_t i = 0; i < n && !report.h2; ++i) {
        if (report.phase_labels[i] != "saturated") {
            if (h[i] > 0.0) seen_unsaturated = true;
        } else if (seen_unsaturated) {
            report.h2 = h[i];
        }
    }

    // The half-saturated onset shows as a knee in M_b(H): the slope drops
    // once half the sites stop responding. Locate the largest curvature
    // between the flop and saturation, excluding both endpoints where the
    // flop jump and the saturation corner would dominate.
    if (n >= 5) {
        std::vector<double> dh(n - 1);
        for (std::size_t i = 1; i < n; ++i) dh[i - 1] = h[i] - h[i - 1];
        const double margin = 2.0 * abs_median(dh);
        const double lo = (report.h_flop ? *report.h_flop : h.front()) + margin;
        const double hi = (report.h2 ? *report.h2 : h.back()) - margin;
        std::vector<double> curv;
        double peak = 0.0, peak_h = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (h[i] <= lo || h[i] >= hi) continue;
            const double d2 = std::abs(mb[i + 1] - 2.0 * mb[i] + mb[i - 1]);
            curv.push_back(d2);
            if (d2 > peak) {
                peak = d2;
                peak_h = h[i];
            }
        }
        if (peak > 1e-5 && peak > 5.0 * abs_median(curv)) report.h1 = peak_h;
    }
    return report;
}

}  // namespace mcasim
