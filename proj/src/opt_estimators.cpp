#include "beamtrack/opt_estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beamtrack/model.hpp"

namespace beamtrack {

namespace {

void check(const std::span<const std::int64_t>& counts, const ArrayGeometry& geom) {
    if (counts.size() != static_cast<std::size_t>(geom.cell_count()))
        throw std::invalid_argument("objective: counts length does not match geometry");
}

}  // namespace

double nls_objective(double x, double y, std::span<const std::int64_t> counts,
                     const BeamParams& scale, const ArrayGeometry& geom) {
    check(counts, geom);
    std::vector<double> lams(geom.cell_count());
    fill_cell_means(scale.with_center(x, y), geom, lams);
    double sum = 0.0;
    for (int m = 0; m < geom.cell_count(); ++m) {
        const double r = static_cast<double>(counts[m]) - lams[m];
        sum += r * r;
    }
    return sum;
}

double mle_objective(double x, double y, std::span<const std::int64_t> counts,
                     const BeamParams& scale, const ArrayGeometry& geom) {
    check(counts, geom);
    const BeamParams candidate = scale.with_center(x, y);
    std::vector<double> lams(geom.cell_count());
    fill_cell_means(candidate, geom, lams);
    double sum = 0.0;
    for (int m = 0; m < geom.cell_count(); ++m) {
        if (counts[m] == 0) continue;
        if (!(lams[m] > 0.0)) return -1e300;  // a positive count has zero mean
        sum += static_cast<double>(counts[m]) * std::log(lams[m]);
    }
    return sum - (array_capture(candidate, geom) + candidate.lambda_n * geom.array_area());
}

GaConfig make_tracking_ga_config(const ArrayGeometry& geom, const GaConfig& base) {
    GaConfig config = base;
    config.x_lo = config.y_lo = -geom.half_width();
    config.x_hi = config.y_hi = geom.half_width();
    if (!(config.mutation_sigma > 0.0)) config.mutation_sigma = 0.5 * geom.cell_side();
    return config;
}

namespace {

PositionEstimate run_tracker(const CountFrame& frame, const BeamParams& scale,
                             const ArrayGeometry& geom, const GaConfig& config,
                             RngStream& stream, EstimatorTag tag) {
    const GaConfig ga = make_tracking_ga_config(geom, config);
    const bool minimize = tag == EstimatorTag::NLS;
    const auto fitness = [&](double x, double y) {
        const double v = minimize
                             ? nls_objective(x, y, frame.counts, scale, geom)
                             : mle_objective(x, y, frame.counts, scale, geom);
        return minimize ? -v : v;
    };
    const GaResult best = ga_optimize(fitness, ga, stream);
    PositionEstimate est{best.x, best.y, tag, false};
    est.degenerate = frame.total() == 0;
    return est;
}

}  // namespace

PositionEstimate estimate_nls(const CountFrame& frame, const BeamParams& scale,
                              const ArrayGeometry& geom, const GaConfig& config,
                              RngStream& stream) {
    return run_tracker(frame, scale, geom, config, stream, EstimatorTag::NLS);
}

PositionEstimate estimate_mle(const CountFrame& frame, const BeamParams& scale,
                              const ArrayGeometry& geom, const GaConfig& config,
                              RngStream& stream) {
    return run_tracker(frame, scale, geom, config, stream, EstimatorTag::MLE);
}

}  // namespace beamtrack
