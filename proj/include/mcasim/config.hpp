#pragma once

#include <string>

#include "mcasim/model.hpp"
#include "mcasim/nelder_mead.hpp"

namespace mcasim {

// What a sweep varies. The three field kinds move the magnitude along a fixed
// crystal axis; angle_bc rotates a fixed-magnitude field through the bc plane;
// high_field is field_b with ranges meant for the saturation regime.
enum class SweepKind { field_b, field_a, field_c, angle_bc, high_field };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

// Full description of one CLI run, assembled from a sectioned key = value
// file. Ranges are tesla for field sweeps and degrees for angle sweeps.
struct RunConfig {
    ModelParams model = ModelParams::defaults();
    SweepKind kind = SweepKind::field_b;
    double start = 0.0;
    double stop = 3.5;
    double step = 0.01;
    double fixed_magnitude = 0.0;  // tesla, angle sweeps only
    OptimizerConfig optimizer;
    bool twins = false;
    long shots = 0;  // 0 means no shot-sampling demo attached to this config
    std::string output_dir = ".";
    bool emit_plots = false;
    // Warm starts reuse each optimum as the next seed and force sequential
    // execution; cold starts are independent per point and parallelize across
    // optimizer.threads.
    bool warm_start = true;

    void validate() const;
};

// Parses the [model] / [sweep] / [optimizer] file at `path`. Unknown sections
// or keys are configuration errors naming the offender, as are unreadable
// files and malformed values.
RunConfig parse_config(const std::string& path);

// Same grammar from an in-memory string; `origin` names the source in errors.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace mcasim
