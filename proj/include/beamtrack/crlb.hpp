#pragma once

#include "beamtrack/beam.hpp"
#include "beamtrack/geometry.hpp"

namespace beamtrack {

/// Closed-form per-cell gradient integrals of the log-likelihood:
/// g_x = integral over the cell of (I0/rho^4)(x - x0) exp(-r^2/2rho^2).
struct GradientIntegrals {
    double g_x, g_y;
};

GradientIntegrals cell_gradient_integrals(const BeamParams& beam,
                                          const ArrayGeometry& geom, int m);

/// 2x2 Fisher information for (x0, y0); i_xy holds both off-diagonals.
struct FisherMatrix {
    double i_xx, i_yy, i_xy;
};

FisherMatrix fisher_matrix(const BeamParams& beam, const ArrayGeometry& geom);

struct CrlbResult {
    double var_x_lb, var_y_lb;
};

/// Diagonal of the inverse Fisher matrix; throws for singular models.
CrlbResult crlb_from_fisher(const FisherMatrix& info);
CrlbResult crlb(const BeamParams& beam, const ArrayGeometry& geom);

}  // namespace beamtrack
