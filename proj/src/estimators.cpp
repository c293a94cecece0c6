#include "beamtrack/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "beamtrack/model.hpp"

namespace beamtrack {

std::string to_string(EstimatorTag tag) {
    switch (tag) {
        case EstimatorTag::MDC: return "mdc";
        case EstimatorTag::Centroid: return "centroid";
        case EstimatorTag::AUC: return "auc";
        case EstimatorTag::ACE1: return "ace1";
        case EstimatorTag::ACE2: return "ace2";
        case EstimatorTag::NLS: return "nls";
        case EstimatorTag::MLE: return "mle";
    }
    return "?";
}

namespace {

void check_frame(const CountFrame& frame, const ArrayGeometry& geom) {
    if (frame.counts.size() != static_cast<std::size_t>(geom.cell_count()))
        throw std::invalid_argument("estimator: frame length does not match geometry");
}

PositionEstimate degenerate_estimate(EstimatorTag tag) {
    return PositionEstimate{0.0, 0.0, tag, true};
}

// Weighted centroid over the given cells with weights Z^n. Weights are
// rescaled by Z_max^n only when the plain power would overflow; the estimate
// is invariant under that common factor.
PositionEstimate power_weighted_centroid(const CountFrame& frame,
                                         const ArrayGeometry& geom,
                                         const std::vector<int>& cells, double n_power,
                                         EstimatorTag tag) {
    std::int64_t z_max = 0;
    for (int m : cells) z_max = std::max(z_max, frame.counts[m]);
    if (z_max == 0) return degenerate_estimate(tag);
    const double denom =
        n_power * std::log(static_cast<double>(z_max)) > 700.0
            ? static_cast<double>(z_max)
            : 1.0;
    double wsum = 0.0, xsum = 0.0, ysum = 0.0;
    for (int m : cells) {
        if (frame.counts[m] == 0) continue;
        const double w = std::pow(static_cast<double>(frame.counts[m]) / denom, n_power);
        wsum += w;
        xsum += w * geom.cell_center_x(m);
        ysum += w * geom.cell_center_y(m);
    }
    return PositionEstimate{xsum / wsum, ysum / wsum, tag, false};
}

}  // namespace

PositionEstimate estimate_mdc(const CountFrame& frame, const ArrayGeometry& geom,
                              RngStream& stream) {
    check_frame(frame, geom);
    const std::int64_t z_max = *std::max_element(frame.counts.begin(), frame.counts.end());
    if (z_max == 0) return degenerate_estimate(EstimatorTag::MDC);
    std::vector<int> ties;
    for (int m = 0; m < geom.cell_count(); ++m)
        if (frame.counts[m] == z_max) ties.push_back(m);
    const int pick = ties[stream.next_below(ties.size())];
    return PositionEstimate{geom.cell_center_x(pick), geom.cell_center_y(pick),
                            EstimatorTag::MDC, false};
}

PositionEstimate estimate_centroid(const CountFrame& frame, const ArrayGeometry& geom) {
    check_frame(frame, geom);
    const std::int64_t z_s = frame.total();
    if (z_s == 0) return degenerate_estimate(EstimatorTag::Centroid);
    double xsum = 0.0, ysum = 0.0;
    for (int m = 0; m < geom.cell_count(); ++m) {
        if (frame.counts[m] == 0) continue;
        const double z = static_cast<double>(frame.counts[m]);
        xsum += z * geom.cell_center_x(m);
        ysum += z * geom.cell_center_y(m);
    }
    return PositionEstimate{xsum / static_cast<double>(z_s),
                            ysum / static_cast<double>(z_s), EstimatorTag::Centroid,
                            false};
}

PositionEstimate estimate_auc(const CountFrame& frame, const ArrayGeometry& geom,
                              const BeamParams& scale) {
    if (!(scale.I0 > 0.0)) throw std::invalid_argument("estimate_auc: I0 must be > 0");
    PositionEstimate est = estimate_centroid(frame, geom);
    est.tag = EstimatorTag::AUC;
    if (est.degenerate) return est;
    const double k = total_mean_count(scale, geom) / (2.0 * M_PI * scale.I0);
    est.x *= k;
    est.y *= k;
    return est;
}

PositionEstimate estimate_ace1(const CountFrame& frame, const ArrayGeometry& geom,
                               const AceParams& params) {
    check_frame(frame, geom);
    if (!(params.n_power >= 1.0))
        throw std::invalid_argument("estimate_ace1: n_power must be >= 1");
    std::vector<int> all(geom.cell_count());
    std::iota(all.begin(), all.end(), 0);
    return power_weighted_centroid(frame, geom, all, params.n_power, EstimatorTag::ACE1);
}

PositionEstimate estimate_ace2(const CountFrame& frame, const ArrayGeometry& geom,
                               const AceParams& params) {
    check_frame(frame, geom);
    if (!(params.n_power >= 1.0))
        throw std::invalid_argument("estimate_ace2: n_power must be >= 1");
    if (params.n_top < 1 || params.n_top > geom.cell_count())
        throw std::invalid_argument("estimate_ace2: n_top must be in [1, M]");
    std::vector<int> order(geom.cell_count());
    std::iota(order.begin(), order.end(), 0);
    // Largest counts first; equal counts keep ascending cell index.
    std::stable_sort(order.begin(), order.end(), [&frame](int a, int b) {
        return frame.counts[a] > frame.counts[b];
    });
    order.resize(params.n_top);
    // Accumulate in cell-index order so n_top = M reproduces ACE1 exactly.
    std::sort(order.begin(), order.end());
    return power_weighted_centroid(frame, geom, order, params.n_power,
                                   EstimatorTag::ACE2);
}

}  // namespace beamtrack
