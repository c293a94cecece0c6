#include "beamtrack/model.hpp"

#include <cmath>
#include <stdexcept>

#include "beamtrack/special.hpp"

namespace beamtrack {

double cell_signal_mean(const BeamParams& beam, const ArrayGeometry& geom, int m) {
    const CellBounds b = geom.cell_bounds(m);
    const double fx = std_normal_cdf_diff((b.x_lo - beam.x0) / beam.rho,
                                          (b.x_hi - beam.x0) / beam.rho);
    const double fy = std_normal_cdf_diff((b.y_lo - beam.y0) / beam.rho,
                                          (b.y_hi - beam.y0) / beam.rho);
    return 2.0 * M_PI * beam.I0 * fy * fx;
}

double cell_mean_count(const BeamParams& beam, const ArrayGeometry& geom, int m) {
    return cell_signal_mean(beam, geom, m) + beam.lambda_n * geom.cell_area();
}

void fill_cell_means(const BeamParams& beam, const ArrayGeometry& geom,
                     std::span<double> out) {
    const int n = geom.cells_per_side();
    if (out.size() != static_cast<std::size_t>(geom.cell_count()))
        throw std::invalid_argument("fill_cell_means: output span has wrong length");
    const double side = geom.cell_side();
    const double a = geom.half_width();
    std::vector<double> fx(n), fy(n);
    for (int i = 0; i < n; ++i) {
        const double lo = -a + i * side;
        fx[i] = std_normal_cdf_diff((lo - beam.x0) / beam.rho,
                                    (lo + side - beam.x0) / beam.rho);
        fy[i] = std_normal_cdf_diff((lo - beam.y0) / beam.rho,
                                    (lo + side - beam.y0) / beam.rho);
    }
    const double scale = 2.0 * M_PI * beam.I0;
    const double bg = beam.lambda_n * geom.cell_area();
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col)
            out[static_cast<std::size_t>(row) * n + col] = scale * fy[row] * fx[col] + bg;
}

std::vector<double> cell_means(const BeamParams& beam, const ArrayGeometry& geom) {
    std::vector<double> out(geom.cell_count());
    fill_cell_means(beam, geom, out);
    return out;
}

double array_capture(const BeamParams& beam, const ArrayGeometry& geom) {
    const double a = geom.half_width();
    const double fx = std_normal_cdf_diff((-a - beam.x0) / beam.rho,
                                          (a - beam.x0) / beam.rho);
    const double fy = std_normal_cdf_diff((-a - beam.y0) / beam.rho,
                                          (a - beam.y0) / beam.rho);
    return 2.0 * M_PI * beam.I0 * fy * fx;
}

double total_mean_count(const BeamParams& beam, const ArrayGeometry& geom) {
    return array_capture(beam, geom) + beam.lambda_n * geom.array_area();
}

double cell_snr(const BeamParams& beam, const ArrayGeometry& geom, int m) {
    const double bg = beam.lambda_n * geom.cell_area();
    if (!(bg > 0.0))
        throw std::domain_error("cell_snr: lambda_n must be > 0 (noiseless path undefined)");
    return cell_signal_mean(beam, geom, m) / bg;
}

}  // namespace beamtrack
