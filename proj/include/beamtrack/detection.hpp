#pragma once

#include <cstdint>
#include <vector>

#include "beamtrack/beam.hpp"
#include "beamtrack/frames.hpp"
#include "beamtrack/geometry.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

/// Per-cell PPM receiver weights alpha_m = ln(1 + SNR_m), evaluated at the
/// receiver's assumed beam center.
struct ReceiverWeights {
    std::vector<double> alpha;
};

ReceiverWeights build_weights(const BeamParams& assumed, const ArrayGeometry& geom);

/// Maximum-likelihood slot decision: argmax over slots of sum_m alpha_m Z_m.
/// Ties are broken uniformly at random from the stream.
int ml_decide(const PpmFrame& frame, const ReceiverWeights& weights, RngStream& stream);

enum class ErrorProbMethod { gaussian_approx, monte_carlo };

struct ErrorProbResult {
    double p_symbol_error = 0.0;
    double mu_v = 0.0;
    double sigma_v = 0.0;
    ErrorProbMethod method = ErrorProbMethod::gaussian_approx;
    double stderr_est = 0.0;  // binomial half-width, Monte Carlo only
    std::int64_t trials = 0;
};

/// Monte Carlo symbol error rate: photons generated at beam_true, weights
/// built at the assumed center carried by `assumed`.
ErrorProbResult symbol_error_mc(const BeamParams& beam_true, const BeamParams& assumed,
                                const ArrayGeometry& geom, int order,
                                std::int64_t trials, RngStream& stream);

/// Gaussian approximation: V ~ N(mu_v, sigma_v^2) and
/// P(correct | j) = (1 - Phi(-mu_v/sigma_v))^(order-1).
ErrorProbResult symbol_error_gaussian(const BeamParams& beam_true,
                                      const BeamParams& assumed,
                                      const ArrayGeometry& geom, int order);

/// Decision-statistic moments for an assumed center (exposed for tests and
/// the landscape scan).
void decision_statistic_moments(const BeamParams& beam_true, const BeamParams& assumed,
                                const ArrayGeometry& geom, double& mu_v,
                                double& sigma_v);

struct LandscapePoint {
    double x, y, ratio;  // mu_v / sigma_v at the assumed center (x, y)
};

/// Evaluates mu_v/sigma_v on a grid_per_side x grid_per_side lattice of
/// assumed centers spanning the array.
std::vector<LandscapePoint> snr_ratio_landscape(const BeamParams& beam_true,
                                                const ArrayGeometry& geom,
                                                int grid_per_side);

LandscapePoint landscape_argmax(const std::vector<LandscapePoint>& grid);

}  // namespace beamtrack
