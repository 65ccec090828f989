#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace gaplab {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// One named pass/fail check with the number it was judged on.  The
/// comparator string records how measured relates to threshold, e.g. "<=".
struct Criterion {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string comparator;
    std::string detail;
};

struct ExperimentSummary {
    std::string experiment;
    std::uint64_t seed = kDefaultSeed;
    bool pass = false;
    std::vector<Criterion> criteria;

    nlohmann::json to_json() const;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    nlohmann::json default_parameters;
};

/// Registry of runnable experiments, in a fixed presentation order.
const std::vector<ExperimentInfo>& experiment_registry();

/// Worker count for trial sweeps: the LAB_WORKERS environment variable when
/// set (>= 1), otherwise hardware concurrency clamped to [1, 8].
std::size_t worker_count();

/// Validates the config, runs the experiment, and writes
///   <output_dir>/config.json     resolved config (defaults filled in)
///   <output_dir>/data/*.csv      raw per-row results
///   <output_dir>/summary.json    criteria with pass/fail
/// Config keys: experiment (string), output_dir (string), optional seed,
/// optional parameters object.  Unknown keys anywhere are rejected.
ExperimentSummary run_experiment(const nlohmann::json& config);

struct VerifyResult {
    ExperimentSummary recomputed;       // criteria re-derived from data/*.csv
    bool matches_summary = false;       // stored summary.json agrees
    std::vector<std::string> mismatches;
};

/// Re-derives every criterion of a completed run from its CSV files alone
/// and compares with the stored summary.
VerifyResult verify_run(const std::filesystem::path& run_dir);

}  // namespace gaplab
