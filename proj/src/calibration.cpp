#include "beamtrack/calibration.hpp"

#include <stdexcept>

namespace beamtrack {

double estimate_lambda_n(const std::vector<CountFrame>& noise_frames,
                         const ArrayGeometry& geom) {
    if (noise_frames.empty())
        throw std::invalid_argument("estimate_lambda_n: need at least one noise frame");
    std::int64_t total = 0;
    for (const auto& f : noise_frames) total += f.total();
    return static_cast<double>(total) /
           (geom.array_area() * static_cast<double>(noise_frames.size()));
}

CalibrationEstimate estimate_I0(const std::vector<CountFrame>& signal_frames,
                                const std::vector<CountFrame>& noise_frames,
                                const ArrayGeometry& geom, double lambda0) {
    if (signal_frames.empty() || signal_frames.size() != noise_frames.size())
        throw std::invalid_argument(
            "estimate_I0: need equally many (>=1) signal and noise frames");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("estimate_I0: lambda0 must be > 0");

    CalibrationEstimate est;
    est.N_used = static_cast<int>(signal_frames.size());
    est.lambda_n_hat = estimate_lambda_n(noise_frames, geom);

    std::int64_t total = 0;
    for (const auto& f : signal_frames) total += f.total();
    const double n = static_cast<double>(signal_frames.size());
    est.I0_hat = static_cast<double>(total) / (lambda0 * n) -
                 est.lambda_n_hat * geom.array_area() / lambda0;
    if (est.I0_hat < 0.0) {
        est.I0_hat = 0.0;
        est.clamped = true;
    }
    return est;
}

}  // namespace beamtrack
