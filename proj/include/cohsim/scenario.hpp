#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohsim/config.hpp"

namespace cohsim::io {

struct OutputRecord {
    std::string file;  // name inside the output directory
    std::uint64_t bytes = 0;
    std::string fnv1a64_hex;

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

// Written alongside every run as manifest.json; re-running with the embedded
// config reproduces byte-identical outputs (the timestamp is informational).
struct RunManifest {
    std::string scenario;
    std::string timestamp_utc;
    std::uint64_t master_seed = 0;
    ScenarioConfig config;
    std::vector<OutputRecord> outputs;
};

// Executes the scenario, writes its data files plus manifest.json into
// cfg.output.dir (created if missing), and returns the manifest.
RunManifest run_scenario(const ScenarioConfig& cfg);

std::string manifest_to_json(const RunManifest& m);

}  // namespace cohsim::io
