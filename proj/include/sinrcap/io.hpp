#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "sinrcap/concentration.hpp"

namespace sinrcap {

// Everything one `run` produces: the four experiment results plus the
// artifact files written into the output directory.
struct RunArtifacts {
    InterferenceResult interference;
    CutResult cut;
    CapacityResult capacity;
    AnnulusResult annulus;
    std::vector<std::string> files; // names relative to the output directory
};

// Run all four experiments for `cfg` and write interference.csv, cut.csv,
// capacity.csv, annulus.csv, bounds.csv, report.json and manifest.json into
// `out_dir` (created if missing). `resolved_config` is echoed into the
// report and manifest. Progress lines go to `log` when given. Every file
// except manifest.json (which carries a wall-clock timestamp) is a pure
// function of (config, base_seed).
RunArtifacts write_run_artifacts(const ExperimentConfig& cfg,
                                 const nlohmann::json& resolved_config,
                                 const std::string& out_dir, std::ostream* log);

}  // namespace sinrcap
