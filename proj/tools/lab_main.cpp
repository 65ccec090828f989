#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaplab/error.hpp"
#include "gaplab/experiments.hpp"

namespace {

void print_criteria(const gaplab::ExperimentSummary& s) {
    for (const gaplab::Criterion& c : s.criteria) {
        std::printf("  [%s] %-16s measured=%-12.6g %s %-12.6g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.comparator.c_str(), c.threshold,
                    c.detail.c_str());
    }
}

int cmd_run(const std::string& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
        return 2;
    }
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: malformed JSON in '%s': %s\n", config_path.c_str(),
                     e.what());
        return 2;
    }
    const gaplab::ExperimentSummary summary = gaplab::run_experiment(cfg);
    std::printf("%s (seed %llu)\n", summary.experiment.c_str(),
                static_cast<unsigned long long>(summary.seed));
    print_criteria(summary);
    std::printf("result: %s\n", summary.pass ? "PASS" : "FAIL");
    return summary.pass ? 0 : 1;
}

int cmd_list() {
    for (const gaplab::ExperimentInfo& e : gaplab::experiment_registry()) {
        std::printf("%s\n  %s\n  defaults: %s\n", e.name.c_str(), e.description.c_str(),
                    e.default_parameters.dump().c_str());
    }
    return 0;
}

int cmd_verify(const std::string& run_dir) {
    const gaplab::VerifyResult res = gaplab::verify_run(run_dir);
    std::printf("%s (recomputed from %s/data)\n", res.recomputed.experiment.c_str(),
                run_dir.c_str());
    print_criteria(res.recomputed);
    for (const std::string& m : res.mismatches) {
        std::printf("  mismatch: %s\n", m.c_str());
    }
    std::printf("result: %s, stored summary %s\n", res.recomputed.pass ? "PASS" : "FAIL",
                res.matches_summary ? "confirmed" : "NOT confirmed");
    return (res.recomputed.pass && res.matches_summary) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory: torsion fields, heat decay, oscillation counts"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path, "path to the config JSON file")->required();

    CLI::App* list =
        app.add_subcommand("list-experiments", "list experiments with their default parameters");

    std::string run_dir;
    CLI::App* verify =
        app.add_subcommand("verify", "re-derive pass/fail for a finished run directory");
    verify->add_option("run_dir", run_dir, "directory containing config.json, data/, summary.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // --help and friends exit 0; every real usage error maps to 2
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (list->parsed()) return cmd_list();
        if (verify->parsed()) return cmd_verify(run_dir);
    } catch (const gaplab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
