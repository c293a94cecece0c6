#pragma once

#include <vector>

#include "beamtrack/frames.hpp"
#include "beamtrack/geometry.hpp"

namespace beamtrack {

// Capture integral Lambda_0 under full beam capture (the default assumption
// during calibration).
inline constexpr double kFullCaptureLambda0 = 2.0 * M_PI;

struct CalibrationEstimate {
    double I0_hat = 0.0;
    double lambda_n_hat = 0.0;
    int N_used = 0;
    bool clamped = false;  // negative raw I0 estimate was clamped to 0
};

/// Method-of-moments background estimate: all noise-slot counts divided by
/// |A| * N.
double estimate_lambda_n(const std::vector<CountFrame>& noise_frames,
                         const ArrayGeometry& geom);

/// Method-of-moments intensity estimate from N signal slots and N paired
/// noise slots. Negative estimates are clamped to 0 and flagged.
CalibrationEstimate estimate_I0(const std::vector<CountFrame>& signal_frames,
                                const std::vector<CountFrame>& noise_frames,
                                const ArrayGeometry& geom,
                                double lambda0 = kFullCaptureLambda0);

}  // namespace beamtrack
