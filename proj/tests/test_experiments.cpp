#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gaplab/error.hpp"
#include "gaplab/experiments.hpp"
#include "json.hpp"

using namespace gaplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::path("exp_test_runs") / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool has_criterion(const ExperimentSummary& s, const std::string& name) {
    for (const Criterion& c : s.criteria) {
        if (c.name == name) return true;
    }
    return false;
}

json cfg(const std::string& experiment, const fs::path& out, json params = json::object()) {
    json c = {{"experiment", experiment}, {"output_dir", out.string()}};
    if (!params.empty()) c["parameters"] = params;
    return c;
}

}  // namespace

TEST_CASE("registry lists every experiment once, in order") {
    const auto& reg = experiment_registry();
    REQUIRE(reg.size() == 7);
    const std::vector<std::string> expected = {
        "rect-sweep",     "ellipse-sweep",   "heat-decay", "prop2-property",
        "lemma1-property", "thm2-ratio",     "lemma5-property"};
    for (std::size_t i = 0; i < reg.size(); ++i) {
        CHECK(reg[i].name == expected[i]);
        CHECK(!reg[i].description.empty());
        CHECK(reg[i].default_parameters.is_object());
    }
}

TEST_CASE("config validation rejects malformed requests") {
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] {
        run_experiment({{"experiment", "no-such-thing"}, {"output_dir", "x"}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] {
        run_experiment({{"experiment", "thm2-ratio"}, {"output_dir", "x"}, {"bogus", 1}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] {
        run_experiment({{"experiment", "thm2-ratio"},
                        {"output_dir", "x"},
                        {"parameters", {{"no_such_param", 3}}}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] {
        run_experiment({{"experiment", "thm2-ratio"},
                        {"output_dir", "x"},
                        {"parameters", {{"order", "two"}}}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidArgument,
                      [] { run_experiment({{"output_dir", "x"}}); }));
}

TEST_CASE("worker count honors LAB_WORKERS and validates it") {
    setenv("LAB_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("LAB_WORKERS", "0", 1);
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { (void)worker_count(); }));
    setenv("LAB_WORKERS", "many", 1);
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { (void)worker_count(); }));
    unsetenv("LAB_WORKERS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("coefficient ratio experiment: run, rerun, verify") {
    const fs::path dir_a = fresh_dir("thm2_a");
    const ExperimentSummary s = run_experiment(cfg("thm2-ratio", dir_a));
    CHECK(s.experiment == "thm2-ratio");
    CHECK(s.seed == kDefaultSeed);
    CHECK(s.pass);
    CHECK(has_criterion(s, "stability"));
    CHECK(has_criterion(s, "spot_const"));
    CHECK(has_criterion(s, "spot_sine"));
    CHECK(fs::exists(dir_a / "config.json"));
    CHECK(fs::exists(dir_a / "summary.json"));
    CHECK(fs::exists(dir_a / "data" / "thm2_ratio.csv"));
    CHECK(fs::exists(dir_a / "data" / "ratio_spot.csv"));
    CHECK(!fs::exists(dir_a / "incomplete"));

    // identical seed, identical bytes
    const fs::path dir_b = fresh_dir("thm2_b");
    (void)run_experiment(cfg("thm2-ratio", dir_b));
    CHECK(slurp(dir_a / "data" / "thm2_ratio.csv") == slurp(dir_b / "data" / "thm2_ratio.csv"));
    CHECK(slurp(dir_a / "data" / "ratio_spot.csv") == slurp(dir_b / "data" / "ratio_spot.csv"));

    const VerifyResult v = verify_run(dir_a);
    CHECK(v.matches_summary);
    CHECK(v.mismatches.empty());
    CHECK(v.recomputed.pass);
}

TEST_CASE("heat decay experiment passes with default parameters") {
    const ExperimentSummary s = run_experiment(cfg("heat-decay", fresh_dir("heat")));
    CHECK(s.pass);
    CHECK(has_criterion(s, "slope_n2"));
    CHECK(has_criterion(s, "slope_n3"));
}

TEST_CASE("decay bound experiment holds on a reduced trial budget") {
    const fs::path dir = fresh_dir("prop2");
    const ExperimentSummary s = run_experiment(cfg("prop2-property", dir, {{"trials", 64}}));
    CHECK(s.pass);
    CHECK(has_criterion(s, "bound_holds"));
    CHECK(has_criterion(s, "sharp_sine"));

    // tampering with the data is caught by verification
    const fs::path trials_csv = dir / "data" / "prop2_trials.csv";
    std::string text = slurp(trials_csv);
    text += "9999,1,1,1,2,-1\n";
    std::ofstream(trials_csv, std::ios::binary | std::ios::trunc) << text;
    const VerifyResult v = verify_run(dir);
    CHECK(!v.recomputed.pass);
    CHECK(!v.matches_summary);
    CHECK(!v.mismatches.empty());
}

TEST_CASE("oscillation floor experiment on a reduced trial budget") {
    const ExperimentSummary s = run_experiment(cfg(
        "lemma1-property", fresh_dir("lemma1"),
        {{"trials_per_m", 6}, {"m_values", {2, 3}}}));
    CHECK(s.pass);
    CHECK(has_criterion(s, "all_trials"));
    CHECK(has_criterion(s, "sharp_attained"));
}

TEST_CASE("boundary oscillation experiment on a reduced trial budget") {
    const ExperimentSummary s =
        run_experiment(cfg("lemma5-property", fresh_dir("lemma5"), {{"trials", 12}}));
    CHECK(s.pass);
    CHECK(has_criterion(s, "pure_cases"));
    CHECK(has_criterion(s, "random_trials"));
    CHECK(has_criterion(s, "dictionary"));
}

TEST_CASE("ellipse sweep passes at a coarse grid, where quadratics are exact") {
    const ExperimentSummary s = run_experiment(cfg(
        "ellipse-sweep", fresh_dir("ellipse"),
        {{"axes", {{1.0, 1.0}, {2.0, 1.0}}}, {"solve_axes", {{1.0, 1.0}}}, {"h_divisor", 16}}));
    CHECK(s.pass);
    CHECK(has_criterion(s, "disk_lambda"));
    CHECK(has_criterion(s, "disk_trace"));
    CHECK(has_criterion(s, "chat_circle"));
    CHECK(has_criterion(s, "ml_laplacian"));
    CHECK(has_criterion(s, "ml_min_location"));
    CHECK(!has_criterion(s, "ellipse_lambda"));
}

TEST_CASE("rectangle sweep without solves checks only the closed form") {
    const ExperimentSummary s =
        run_experiment(cfg("rect-sweep", fresh_dir("rect"), {{"solve", false}}));
    CHECK(s.pass);
    CHECK(has_criterion(s, "sandwich"));
    CHECK(has_criterion(s, "slope"));
    CHECK(has_criterion(s, "exact_runtime"));
    CHECK(!has_criterion(s, "solver_dxx"));
}

TEST_CASE("trial sweeps are worker-count invariant") {
    setenv("LAB_WORKERS", "1", 1);
    const fs::path one = fresh_dir("workers_one");
    (void)run_experiment(cfg("prop2-property", one, {{"trials", 48}}));
    setenv("LAB_WORKERS", "4", 1);
    const fs::path four = fresh_dir("workers_four");
    (void)run_experiment(cfg("prop2-property", four, {{"trials", 48}}));
    unsetenv("LAB_WORKERS");
    CHECK(slurp(one / "data" / "prop2_trials.csv") == slurp(four / "data" / "prop2_trials.csv"));
}

TEST_CASE("a run that dies mid-flight leaves the incomplete marker") {
    const fs::path dir = fresh_dir("dies");
    bool wrapped = false;
    try {
        // modes far beyond the sample grid's Nyquist limit
        (void)run_experiment(cfg("prop2-property", dir,
                                 {{"max_mode_cap", 4000}, {"grid", 256}, {"trials", 4}}));
    } catch (const Error& e) {
        wrapped = e.kind() == ErrorKind::Aliasing &&
                  std::string(e.what()).find("[experiment: prop2-property]") != std::string::npos;
    }
    CHECK(wrapped);
    CHECK(fs::exists(dir / "incomplete"));
    CHECK(!fs::exists(dir / "summary.json"));
}

TEST_CASE("verification flags a missing run directory") {
    CHECK(throws_kind(ErrorKind::Io, [] { (void)verify_run("exp_test_runs/nonexistent"); }));
}
