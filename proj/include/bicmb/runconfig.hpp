#pragma once

// Simulation run configuration: a JSON document with sections `code`,
// `interleaver`, `phy` and `sim`. Unknown keys are rejected so typos
// cannot silently fall back to defaults, and every report embeds the
// fully resolved configuration for reproducibility.

#include <string>

#include "json.hpp"

#include "bicmb/sim.hpp"

namespace bicmb {

struct RunConfig {
    SimConfig sim;
    double fit_window_lo = 0.0;  // defaults to the SNR list extremes
    double fit_window_hi = 0.0;
};

// `base_dir` resolves a relative interleaver "file" reference.
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");

// Fully resolved, self-contained form (interleaver inlined as text).
nlohmann::json resolved_config_json(const RunConfig& cfg);

}  // namespace bicmb
