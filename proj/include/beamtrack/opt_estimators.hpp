#pragma once

#include <span>

#include "beamtrack/estimators.hpp"
#include "beamtrack/ga.hpp"

namespace beamtrack {

/// Sum of squared residuals between the observed counts and the cell means a
/// beam centered at (x, y) would produce; `scale` supplies I0, rho, lambda_n.
double nls_objective(double x, double y, std::span<const std::int64_t> counts,
                     const BeamParams& scale, const ArrayGeometry& geom);

/// Poisson log-likelihood of the counts for center (x, y), up to the
/// z_m!-independent constant: sum z_m ln Lambda_m - (array capture + lambda_n |A|).
double mle_objective(double x, double y, std::span<const std::int64_t> counts,
                     const BeamParams& scale, const ArrayGeometry& geom);

/// GaConfig with the box set to the array and the default mutation scale
/// (half a cell side) filled in.
GaConfig make_tracking_ga_config(const ArrayGeometry& geom, const GaConfig& base);

PositionEstimate estimate_nls(const CountFrame& frame, const BeamParams& scale,
                              const ArrayGeometry& geom, const GaConfig& config,
                              RngStream& stream);

PositionEstimate estimate_mle(const CountFrame& frame, const BeamParams& scale,
                              const ArrayGeometry& geom, const GaConfig& config,
                              RngStream& stream);

}  // namespace beamtrack
