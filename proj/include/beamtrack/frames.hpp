#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "beamtrack/geometry.hpp"
#include "beamtrack/model.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

enum class SlotKind { signal_plus_noise, noise_only };

/// Photon counts of one observation slot, one entry per cell.
struct CountFrame {
    std::vector<std::int64_t> counts;
    SlotKind kind = SlotKind::signal_plus_noise;

    std::int64_t total() const {
        return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    }
};

/// One M-ary PPM symbol: `order` slots, exactly one carrying the pulse.
struct PpmFrame {
    int order = 2;
    int true_slot = 0;  // 0-based slot index carrying signal+noise
    std::vector<CountFrame> slots;
};

struct CalibrationRun {
    std::vector<CountFrame> signal;
    std::vector<CountFrame> noise;
};

/// Draws each Z_m independently Poisson with mean Lambda_m (signal slot) or
/// lambda_n * A (noise slot).
CountFrame sample_frame(const BeamParams& beam, const ArrayGeometry& geom,
                        SlotKind kind, RngStream& stream);

PpmFrame sample_ppm_frame(const BeamParams& beam, const ArrayGeometry& geom,
                          int order, int true_slot, RngStream& stream);

CalibrationRun sample_calibration_run(const BeamParams& beam, const ArrayGeometry& geom,
                                      int n_slots, RngStream& stream);

}  // namespace beamtrack
