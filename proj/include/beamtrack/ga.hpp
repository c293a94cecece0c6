#pragma once

#include <functional>

#include "beamtrack/rng.hpp"

namespace beamtrack {

/// Real-coded genetic optimizer over a 2-D box. Tournament selection (size 2),
/// blend crossover, per-gene Gaussian mutation, elitism.
struct GaConfig {
    int population = 50;
    int generations = 400;
    double x_lo = -1.0, x_hi = 1.0;
    double y_lo = -1.0, y_hi = 1.0;
    double mutation_sigma = 0.05;
    double mutation_prob = 0.1;
    double crossover_alpha = 0.5;
    int elitism = 2;

    void validate() const;

    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

struct GaResult {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

/// Maximizes `fitness` over the config box; deterministic given the stream.
/// The returned point is the best individual ever evaluated and never lies
/// outside the box.
GaResult ga_optimize(const std::function<double(double, double)>& fitness,
                     const GaConfig& config, RngStream& stream);

}  // namespace beamtrack
