#pragma once

#include <optional>

#include "beamtrack/config.hpp"
#include "beamtrack/csv.hpp"

namespace beamtrack {

struct RunOptions {
    int threads = 0;  // 0: BEAMTRACK_THREADS env var, else hardware concurrency
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
};

/// Number of worker threads a run will use under the given options.
int resolve_threads(const RunOptions& options);

/// Executes the experiment described by the config. Identical (config, seed)
/// pairs produce identical results at any thread count.
SweepResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Beam with the sweep variable applied; exposed for tests.
BeamParams resolve_beam(const ExperimentConfig& config, SweepVariable variable,
                        double value, double array_area);

}  // namespace beamtrack
