#pragma once

#include <string>

#include "beamtrack/beam.hpp"
#include "beamtrack/frames.hpp"
#include "beamtrack/geometry.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

enum class EstimatorTag { MDC, Centroid, AUC, ACE1, ACE2, NLS, MLE };

std::string to_string(EstimatorTag tag);

struct PositionEstimate {
    double x = 0.0;
    double y = 0.0;
    EstimatorTag tag = EstimatorTag::Centroid;
    bool degenerate = false;  // all-zero frame fallback (array center) was used
};

/// Parameters of the adaptive centroid estimators: counts are weighted by
/// their n-th power; ACE2 additionally keeps only the n_top largest counts.
struct AceParams {
    double n_power = 2.0;
    int n_top = 3;

    friend bool operator==(const AceParams&, const AceParams&) = default;
};

/// Center of the cell with the maximum count; ties are broken uniformly at
/// random from the supplied stream.
PositionEstimate estimate_mdc(const CountFrame& frame, const ArrayGeometry& geom,
                              RngStream& stream);

/// Count-weighted mean of cell centers.
PositionEstimate estimate_centroid(const CountFrame& frame, const ArrayGeometry& geom);

/// Centroid scaled by K = Lambda_s / (2 pi I0); `scale` supplies I0, rho,
/// lambda_n and the nominal center used for the capture term.
PositionEstimate estimate_auc(const CountFrame& frame, const ArrayGeometry& geom,
                              const BeamParams& scale);

/// n-th-power-weighted centroid over all cells.
PositionEstimate estimate_ace1(const CountFrame& frame, const ArrayGeometry& geom,
                               const AceParams& params);

/// n-th-power-weighted centroid over the n_top largest counts; ties at the
/// inclusion boundary are resolved by ascending cell index.
PositionEstimate estimate_ace2(const CountFrame& frame, const ArrayGeometry& geom,
                               const AceParams& params);

}  // namespace beamtrack
