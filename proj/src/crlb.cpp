#include "beamtrack/crlb.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beamtrack/model.hpp"
#include "beamtrack/special.hpp"

namespace beamtrack {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;

// exp(-lo^2/2) - exp(-hi^2/2) for the cell edges scaled by rho: the x-part of
// the gradient integral reduces to this corner difference.
inline double gauss_edge_diff(double lo, double hi) {
    return std::exp(-0.5 * lo * lo) - std::exp(-0.5 * hi * hi);
}

}  // namespace

GradientIntegrals cell_gradient_integrals(const BeamParams& beam,
                                          const ArrayGeometry& geom, int m) {
    const CellBounds b = geom.cell_bounds(m);
    const double ux_lo = (b.x_lo - beam.x0) / beam.rho;
    const double ux_hi = (b.x_hi - beam.x0) / beam.rho;
    const double uy_lo = (b.y_lo - beam.y0) / beam.rho;
    const double uy_hi = (b.y_hi - beam.y0) / beam.rho;
    const double scale = kSqrt2Pi * beam.I0 / beam.rho;
    return {scale * gauss_edge_diff(ux_lo, ux_hi) * std_normal_cdf_diff(uy_lo, uy_hi),
            scale * gauss_edge_diff(uy_lo, uy_hi) * std_normal_cdf_diff(ux_lo, ux_hi)};
}

FisherMatrix fisher_matrix(const BeamParams& beam, const ArrayGeometry& geom) {
    beam.validate();
    const int n = geom.cells_per_side();
    const double side = geom.cell_side();
    const double a = geom.half_width();

    // Per-axis pieces: Lambda and the gradient integrals factor into products
    // of one-axis Phi differences and edge-exponential differences.
    std::vector<double> phi_x(n), phi_y(n), edge_x(n), edge_y(n);
    for (int i = 0; i < n; ++i) {
        const double lo = -a + i * side;
        const double ux_lo = (lo - beam.x0) / beam.rho;
        const double ux_hi = (lo + side - beam.x0) / beam.rho;
        const double uy_lo = (lo - beam.y0) / beam.rho;
        const double uy_hi = (lo + side - beam.y0) / beam.rho;
        phi_x[i] = std_normal_cdf_diff(ux_lo, ux_hi);
        phi_y[i] = std_normal_cdf_diff(uy_lo, uy_hi);
        edge_x[i] = gauss_edge_diff(ux_lo, ux_hi);
        edge_y[i] = gauss_edge_diff(uy_lo, uy_hi);
    }

    const double lam_scale = 2.0 * M_PI * beam.I0;
    const double grad_scale = kSqrt2Pi * beam.I0 / beam.rho;
    const double bg = beam.lambda_n * geom.cell_area();

    FisherMatrix info{0.0, 0.0, 0.0};
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double lam = lam_scale * phi_y[row] * phi_x[col] + bg;
            if (!(lam > 0.0))
                throw std::domain_error(
                    "fisher_matrix: cell " + std::to_string(row * n + col) +
                    " has zero mean count (model singular); use lambda_n > 0");
            const double gx = grad_scale * edge_x[col] * phi_y[row];
            const double gy = grad_scale * edge_y[row] * phi_x[col];
            info.i_xx += gx * gx / lam;
            info.i_yy += gy * gy / lam;
            info.i_xy += gx * gy / lam;
        }
    }
    return info;
}

CrlbResult crlb_from_fisher(const FisherMatrix& info) {
    const double det = info.i_xx * info.i_yy - info.i_xy * info.i_xy;
    if (!(det > 0.0) || !(info.i_xx > 0.0) || !(info.i_yy > 0.0))
        throw std::domain_error(
            "crlb: Fisher matrix is singular (beam does not straddle cell "
            "boundaries on both axes)");
    return {info.i_yy / det, info.i_xx / det};
}

CrlbResult crlb(const BeamParams& beam, const ArrayGeometry& geom) {
    return crlb_from_fisher(fisher_matrix(beam, geom));
}

}  // namespace beamtrack
