#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "beamtrack/runner.hpp"

using namespace beamtrack;

namespace {

const char* kMinimalCrlb = R"(
kind = crlb_sweep
beam.I0 = 6.2
beam.lambda_n = 1.0
sweep.variable = lambda_n
sweep.values = 1,2,3
)";

std::string csv_of(const ExperimentConfig& cfg, int threads) {
    RunOptions options;
    options.threads = threads;
    return to_csv(run_experiment(cfg, options));
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("minimal config parses with documented defaults") {
    const ParseResult r = parse_config(kMinimalCrlb);
    REQUIRE(r.errors.empty());
    const ExperimentConfig& c = *r.config;
    CHECK(c.kind == ExperimentKind::crlb_sweep);
    CHECK(c.truncation.epsilon0 == 1e-5);
    CHECK(c.ga.population == 50);
    CHECK(c.ga.generations == 400);
    CHECK(c.seed == 1);
    CHECK(c.half_width == 1.0);
    CHECK(c.cells_per_side == std::vector<int>{4});
    CHECK(c.estimators.empty());
}

TEST_CASE("errors carry key names and line numbers, and are all collected") {
    const std::string text =
        "kind = mse_sweep\n"
        "geometry.cells_per_side = 0\n"
        "beam.rho = -2\n"
        "no_such_key = 5\n"
        "sweep.variable = noise_power_uw\n"
        "beam.I0 = 3\n";
    const ParseResult r = parse_config(text);
    CHECK(!r.config.has_value());
    CHECK(r.errors.size() >= 4);
    bool saw_cells = false, saw_rho = false, saw_unknown = false;
    for (const auto& e : r.errors) {
        if (e.message.find("geometry.cells_per_side") != std::string::npos) {
            saw_cells = true;
            CHECK(e.line == 2);
        }
        if (e.message.find("beam.rho") != std::string::npos) {
            saw_rho = true;
            CHECK(e.line == 3);
        }
        if (e.message.find("no_such_key") != std::string::npos) saw_unknown = true;
    }
    CHECK(saw_cells);
    CHECK(saw_rho);
    CHECK(saw_unknown);
}

TEST_CASE("duplicate keys warn and keep the last value") {
    const std::string text = std::string(kMinimalCrlb) + "seed = 7\nseed = 9\n";
    const ParseResult r = parse_config(text);
    REQUIRE(r.errors.empty());
    CHECK(r.config->seed == 9);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("duplicate key 'seed'") != std::string::npos);
}

TEST_CASE("intensity styles are mutually exclusive") {
    const std::string text =
        "kind = crlb_sweep\n"
        "beam.I0 = 1\n"
        "beam.signal_power_uw = 1\n"
        "beam.noise_power_uw = 1\n"
        "sweep.variable = noise_power_uw\n"
        "sweep.values = 1\n";
    const ParseResult r = parse_config(text);
    CHECK(!r.config.has_value());
}

TEST_CASE("config round-trips through its canonical text") {
    const std::string text =
        "kind = mse_sweep\n"
        "trials = 500\n"
        "seed = 3\n"
        "beam.center = random\n"
        "beam.signal_power_uw = 1\n"
        "beam.noise_power_uw = 0.6\n"
        "link.slot_seconds = 1e-11\n"
        "sweep.variable = noise_power_uw\n"
        "sweep.values = 0.2,0.6,1.8\n"
        "estimators = mdc,centroid,auc,ace1,ace2\n"
        "analytic = mdc,centroid\n"
        "estimator.ace2.n_top = 3\n";
    const ParseResult first = parse_config(text);
    REQUIRE(first.errors.empty());
    const ParseResult second = parse_config(serialize_config(*first.config));
    REQUIRE(second.errors.empty());
    CHECK(*first.config == *second.config);
}

TEST_CASE("csv emission is stable") {
    SweepResult result;
    CHECK(to_csv(result) == "sweep,estimator,metric,value,stderr,trials,degenerate\n");
    result.rows.push_back({0.2, "mdc", "mse", 1.0 / 3.0, 0.25, 100, 2});
    const std::string once = to_csv(result);
    CHECK(once == to_csv(result));
    CHECK(once.find("0.33333333333333331") != std::string::npos);

    const std::string path = "harness_csv_test.csv";
    emit_csv(result, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == once);
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_csv(result, "no_such_dir/x.csv"), std::runtime_error);
}

TEST_CASE("crlb sweep runs without estimators and grows with noise") {
    const ParseResult r = parse_config(kMinimalCrlb);
    REQUIRE(r.errors.empty());
    const SweepResult result = run_experiment(*r.config, {});
    REQUIRE(result.rows.size() == 6);
    double prev = 0.0;
    for (const auto& row : result.rows) {
        if (row.metric != "var_x_lb") continue;
        CHECK(row.value > prev);
        prev = row.value;
    }
}

TEST_CASE("experiments are deterministic across thread counts") {
    const std::string text =
        "kind = mse_sweep\n"
        "trials = 9000\n"
        "seed = 11\n"
        "beam.center = random\n"
        "beam.I0 = 6.2\n"
        "beam.lambda_n = 2.0\n"
        "sweep.variable = lambda_n\n"
        "sweep.values = 1.0,3.0\n"
        "estimators = mdc,centroid,auc,ace1,ace2\n";
    const ParseResult r = parse_config(text);
    REQUIRE(r.errors.empty());
    const std::string a = csv_of(*r.config, 1);
    const std::string b = csv_of(*r.config, 4);
    const std::string c = csv_of(*r.config, 3);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("ser sweep emits perfect-receiver rows") {
    const std::string text =
        "kind = ser_sweep\n"
        "trials = 2000\n"
        "beam.center = random\n"
        "beam.I0 = 3.1\n"
        "beam.lambda_n = 10\n"
        "sweep.variable = lambda_n\n"
        "sweep.values = 10\n"
        "estimators = centroid\n"
        "ppm.order = 2\n";
    const ParseResult r = parse_config(text);
    REQUIRE(r.errors.empty());
    const SweepResult result = run_experiment(*r.config, {});
    double ser_centroid = -1.0, ser_perfect = -1.0;
    for (const auto& row : result.rows) {
        if (row.metric != "ser") continue;
        (row.estimator == "perfect" ? ser_perfect : ser_centroid) = row.value;
    }
    CHECK(ser_centroid >= 0.0);
    CHECK(ser_perfect >= 0.0);
    CHECK(ser_perfect <= ser_centroid + 0.02);
}

TEST_CASE("landscape and calibrate kinds produce their tables") {
    const std::string land =
        "kind = landscape\n"
        "beam.center = 0.1,0.1\n"
        "beam.I0 = 3.1\n"
        "beam.lambda_n = 10\n"
        "landscape.grid = 11\n";
    const ParseResult lr = parse_config(land);
    REQUIRE(lr.errors.empty());
    const SweepResult lres = run_experiment(*lr.config, {});
    std::int64_t ratio_rows = 0;
    double argmax_x = -10.0;
    for (const auto& row : lres.rows) {
        if (row.metric == "mu_over_sigma") ++ratio_rows;
        if (row.metric == "argmax_x") argmax_x = row.value;
    }
    CHECK(ratio_rows == 121);
    CHECK(std::abs(argmax_x - 0.1) <= 0.2 + 1e-12);

    const std::string cal =
        "kind = calibrate\n"
        "trials = 400\n"
        "beam.I0 = 6.2\n"
        "beam.lambda_n = 2\n"
        "sweep.variable = calibration_slots\n"
        "sweep.values = 4,64\n";
    const ParseResult cr = parse_config(cal);
    REQUIRE(cr.errors.empty());
    const SweepResult cres = run_experiment(*cr.config, {});
    double rmse_small = -1.0, rmse_large = -1.0;
    for (const auto& row : cres.rows) {
        if (row.metric != "i0_rmse") continue;
        (row.sweep == 4.0 ? rmse_small : rmse_large) = row.value;
    }
    CHECK(rmse_large < rmse_small);
}

TEST_CASE("manifest sidecar records the run") {
    SweepResult result;
    const std::string path = "harness_manifest_test.csv";
    emit_csv(result, path);
    write_manifest(path, fnv1a64("kind = crlb_sweep\n"), 7, 0.25, {"w1"});
    std::ifstream in(path + ".manifest.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CHECK(text.find("seed = 7") != std::string::npos);
    CHECK(text.find("version = ") != std::string::npos);
    CHECK(text.find("warning = w1") != std::string::npos);
    std::remove(path.c_str());
    std::remove((path + ".manifest.txt").c_str());
}

}  // TEST_SUITE
