#pragma once

#include <vector>

#include "mcasim/config.hpp"
#include "mcasim/csv.hpp"
#include "mcasim/observables.hpp"

namespace mcasim {

// Everything a sweep computes before any artifact is written. The majority
// records drive classification and transition detection even when the rows
// carry twin-mixed moments, so detected fields describe the intrinsic
// single-domain physics.
struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::vector<MagnetizationRecord> majority;
    PhaseReport report;
    bool all_converged = true;
};

// The field points a config expands to, in sweep order.
std::vector<FieldSpec> sweep_fields(const RunConfig& config);

// Optimizes every sweep point (warm-started sequentially or cold in
// parallel), applies twin mixing when enabled, classifies phases, and
// detects transition fields on magnitude sweeps.
SweepOutcome run_sweep(const RunConfig& config);

// run_sweep plus artifacts under config.output_dir: <kind>.csv, a
// phase_report.json, and an optional <kind>.svg line chart. Returns the
// process exit status: 0 on success, 3 when any point failed to converge
// (the CSV is still written, flagged by its converged column).
int run(const RunConfig& config);

}  // namespace mcasim
