#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "cohsim/ensemble.hpp"
#include "cohsim/montecarlo.hpp"
#include "cohsim/optics.hpp"

namespace cohsim::io {

enum class Scenario : std::uint8_t {
    Fields,
    Eraser,
    HomClassical,
    HomHeterodyne,
    Corrmap,
    Chsh,
    Montecarlo,
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class OutputFormat : std::uint8_t { Csv, Json };

struct EnsembleConfig {
    ensemble::GaussianSpec spec;
    double span_sigmas = 4.0;
    int n_points = 161;

    friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

struct ScanConfig {
    double tau_min = 0.0;
    double tau_max = 0.0;
    int n_tau = 0;  // 0 = scenario default

    friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct OutputConfig {
    std::string dir = "out";
    OutputFormat format = OutputFormat::Csv;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::HomClassical;
    optics::OpticsParams optics;  // angles in radians (parsed from degrees)
    EnsembleConfig ensemble;
    ScanConfig scan;
    mc::SourceConfig source;
    double coincidence_window = 1e-9;
    std::array<double, 4> chsh_angles_deg{0.0, 45.0, -22.5, -67.5};
    double corrmap_step_deg = 1.0;
    int workers = 0;  // 0 = library default thread count
    OutputConfig output;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Strict JSON parsing: unknown keys are rejected by name, defaults applied
// (sigma = 5, span = 4 sigma, 161 points, pair_fraction = 0.01, phi = 0),
// values validated. Throws ConfigError.
ScenarioConfig parse_config(const std::string& json_text);

// Resolved config back to JSON; parse_config(emit_config(c)) == c.
std::string emit_config(const ScenarioConfig& cfg);

// Resolved tau grid for curve scenarios (defaults depend on sigma).
std::vector<double> scan_tau_grid(const ScenarioConfig& cfg);

}  // namespace cohsim::io
