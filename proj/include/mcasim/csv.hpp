#pragma once

#include <array>
#include <string>
#include <vector>

namespace mcasim {

// One emitted sweep point. Moments are in mu_B, energies in meV (4-site
// totals except the explicit per-site column), torque in mu_B * T.
struct SweepRow {
    double field_T = 0.0;
    double alpha_deg = 0.0;
    std::array<double, 3> m_muB{};   // a, b, c components of the site average
    std::array<double, 4> y{};       // per-site b-axis direction components
    double e_j1 = 0.0;
    double e_j1p = 0.0;
    double e_j2 = 0.0;
    double e_j2p = 0.0;
    double e_zeeman = 0.0;
    double e_mca = 0.0;
    double e_total = 0.0;
    double e_mca_per_site = 0.0;
    double tau_muB_T = 0.0;
    std::string phase;
    bool converged = false;
};

// Header plus one line per row, 12 significant digits, byte-deterministic
// for identical inputs. An empty row list is a caller mistake.
std::string format_csv(const std::vector<SweepRow>& rows);

// format_csv written to `path`; unwritable destinations are configuration
// errors.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace mcasim
