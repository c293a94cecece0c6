#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamtrack/analytic.hpp"
#include "beamtrack/estimators.hpp"
#include "beamtrack/ga.hpp"

namespace beamtrack {

enum class ExperimentKind {
    crlb_sweep,
    mse_sweep,
    bias_sweep,
    ser_sweep,
    landscape,
    calibrate
};

enum class CenterSpec { fixed, uniform_random };
enum class ConstantsMode { oracle, calibrated };

enum class SweepVariable {
    none,
    noise_power_uw,
    signal_power_uw,
    lambda_n,
    I0,
    rho,
    cells_per_side,
    calibration_slots
};

std::string to_string(ExperimentKind kind);
std::string to_string(SweepVariable var);

/// Declarative experiment description parsed from the line-oriented
/// key=value format (see README for the key table).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::crlb_sweep;
    std::uint64_t seed = 1;
    std::int64_t trials = 10000;
    std::string out = "result.csv";

    double half_width = 1.0;
    std::vector<int> cells_per_side = {4};

    CenterSpec center_spec = CenterSpec::fixed;
    double center_x = 0.0;
    double center_y = 0.0;
    // random centers are drawn uniformly on [-(a - inset), a - inset]^2, so a
    // positive inset keeps the beam footprint on the array
    double center_inset = 0.0;

    double rho = 0.2;
    bool rho_from_link = false;

    // Exactly one intensity style per config: direct (I0, lambda_n) or
    // physical powers in microwatts converted through the link budget.
    bool power_style = false;
    double signal_power_uw = 0.0;
    double noise_power_uw = 0.0;
    double I0 = 1.0;
    double lambda_n = 0.0;

    double link_eta = 0.5;
    double link_slot_seconds = 1e-11;
    double link_wavelength = 1.55e-6;
    double link_rho0 = 0.01;
    double link_distance = 0.0;

    SweepVariable sweep_variable = SweepVariable::none;
    std::vector<double> sweep_values;

    std::vector<EstimatorTag> estimators;
    std::vector<EstimatorTag> analytic;
    AceParams ace1{2.0, 0};
    AceParams ace2{2.0, 3};
    ConstantsMode constants = ConstantsMode::oracle;
    int calibration_slots = 100;
    int analytic_centers = 256;

    GaConfig ga;
    TruncationPolicy truncation;

    int ppm_order = 2;
    int landscape_grid = 41;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ParseIssue {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;  // set only when errors is empty
    std::vector<ParseIssue> errors;
    std::vector<std::string> warnings;
};

/// Parses and validates a config, collecting every error (not just the
/// first). Duplicate keys keep the last value and add a warning.
ParseResult parse_config(const std::string& text);

/// Canonical text form; parsing it back yields an equal config.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace beamtrack
