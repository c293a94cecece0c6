#pragma once

#include <span>
#include <vector>

#include "beamtrack/beam.hpp"
#include "beamtrack/geometry.hpp"

namespace beamtrack {

/// Expected photon count Lambda_m of cell m in a signal slot:
/// 2*pi*I0 * [Phi dy] * [Phi dx] + lambda_n * A.
double cell_mean_count(const BeamParams& beam, const ArrayGeometry& geom, int m);

/// Signal-only part of Lambda_m (background term excluded).
double cell_signal_mean(const BeamParams& beam, const ArrayGeometry& geom, int m);

/// Fills out[m] = Lambda_m for every cell, factoring the per-axis Phi
/// differences so the cost is O(N) special-function calls plus O(M) products.
void fill_cell_means(const BeamParams& beam, const ArrayGeometry& geom,
                     std::span<double> out);

std::vector<double> cell_means(const BeamParams& beam, const ArrayGeometry& geom);

/// Signal mass captured by the whole array [-a, a]^2 (no background term).
double array_capture(const BeamParams& beam, const ArrayGeometry& geom);

/// Total expected count Lambda_s = sum_m Lambda_m, computed in closed form
/// over the whole array.
double total_mean_count(const BeamParams& beam, const ArrayGeometry& geom);

/// Per-cell SNR_m = (Lambda_m - lambda_n A) / (lambda_n A). Requires
/// lambda_n > 0.
double cell_snr(const BeamParams& beam, const ArrayGeometry& geom, int m);

}  // namespace beamtrack
