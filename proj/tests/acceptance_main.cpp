// Acceptance gate: runs every experiment with default parameters and grades
// nine named criteria, one line each.  Exit 0 iff all nine pass.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "gaplab/error.hpp"
#include "gaplab/experiments.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using gaplab::Criterion;
using gaplab::ExperimentSummary;

namespace {

const Criterion* find(const ExperimentSummary& s, const std::string& name) {
    for (const Criterion& c : s.criteria) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

struct GateItem {
    int number;
    std::string label;
    std::string experiment;
    std::vector<std::string> parts;
};

}  // namespace

int main() {
    try {
        const std::vector<std::string> experiments = {
            "rect-sweep",     "ellipse-sweep",   "heat-decay", "prop2-property",
            "lemma1-property", "thm2-ratio",     "lemma5-property"};

        std::map<std::string, ExperimentSummary> results;
        fs::remove_all("acceptance_runs");
        for (const std::string& name : experiments) {
            std::cerr << "running " << name << " ..." << std::endl;
            nlohmann::json config = {{"experiment", name},
                                     {"output_dir", (fs::path("acceptance_runs") / name).string()}};
            results[name] = gaplab::run_experiment(config);
        }

        const std::vector<GateItem> gate = {
            {1,
             "center curvature envelope and decay rate on rectangles",
             "rect-sweep",
             {"sandwich", "slope", "exact_runtime"}},
            {2,
             "solver reproduces the closed-form rectangle data",
             "rect-sweep",
             {"solver_dxx", "solver_sup", "solver_runtime"}},
            {3,
             "disk and 2:1 ellipse Hessian spectra",
             "ellipse-sweep",
             {"disk_lambda", "disk_trace", "ellipse_lambda"}},
            {4, "heat decay orders for block profiles", "heat-decay", {"slope_n2", "slope_n3"}},
            {5,
             "L2 decay lower bound with sine sharpness",
             "prop2-property",
             {"bound_holds", "sharp_sine"}},
            {6,
             "oscillation and winding floors for high-pass signals",
             "lemma1-property",
             {"all_trials", "sharp_attained"}},
            {7,
             "coefficient-mass ratio stability and spot values",
             "thm2-ratio",
             {"stability", "spot_const", "spot_sine"}},
            {8,
             "concavity defect field and normalized bound constant",
             "ellipse-sweep",
             {"ml_laplacian", "ml_min_location", "chat_circle"}},
            {9,
             "boundary oscillation order and derivative dictionary",
             "lemma5-property",
             {"pure_cases", "random_trials", "dictionary"}},
        };

        int passed = 0;
        for (const GateItem& item : gate) {
            const ExperimentSummary& s = results.at(item.experiment);
            bool ok = true;
            std::string detail;
            for (const std::string& part : item.parts) {
                const Criterion* c = find(s, part);
                if (!detail.empty()) detail += " ";
                if (c == nullptr) {
                    ok = false;
                    detail += part + "=MISSING";
                    continue;
                }
                if (!c->pass) ok = false;
                detail += part + "=" + (c->pass ? "PASS" : "FAIL");
                if (!c->pass) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "(%.6g %s %.6g)", c->measured,
                                  c->comparator.c_str(), c->threshold);
                    detail += buf;
                }
            }
            if (ok) ++passed;
            std::cout << "criterion " << item.number << ": " << (ok ? "PASS" : "FAIL") << " - "
                      << item.label << " (" << detail << ")" << std::endl;
        }

        std::cout << "acceptance: " << passed << "/" << gate.size() << " criteria passed"
                  << std::endl;
        return passed == static_cast<int>(gate.size()) ? 0 : 1;
    } catch (const gaplab::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
