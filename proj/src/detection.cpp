#include "beamtrack/detection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamtrack/model.hpp"
#include "beamtrack/special.hpp"

namespace beamtrack {

ReceiverWeights build_weights(const BeamParams& assumed, const ArrayGeometry& geom) {
    const double bg = assumed.lambda_n * geom.cell_area();
    if (!(bg > 0.0))
        throw std::domain_error("build_weights: lambda_n must be > 0");
    ReceiverWeights w;
    w.alpha.resize(geom.cell_count());
    fill_cell_means(assumed, geom, w.alpha);
    // alpha_m = ln(1 + SNR_m) = ln(Lambda_m / (lambda_n A))
    for (double& v : w.alpha) v = std::log(v / bg);
    return w;
}

int ml_decide(const PpmFrame& frame, const ReceiverWeights& weights, RngStream& stream) {
    if (frame.slots.empty()) throw std::invalid_argument("ml_decide: empty frame");
    std::vector<double> scores(frame.slots.size(), 0.0);
    for (std::size_t s = 0; s < frame.slots.size(); ++s) {
        const auto& counts = frame.slots[s].counts;
        if (counts.size() != weights.alpha.size())
            throw std::invalid_argument("ml_decide: weights length mismatch");
        double acc = 0.0;
        for (std::size_t m = 0; m < counts.size(); ++m)
            acc += weights.alpha[m] * static_cast<double>(counts[m]);
        scores[s] = acc;
    }
    double best = scores[0];
    for (double v : scores) best = std::max(best, v);
    std::vector<int> ties;
    for (std::size_t s = 0; s < scores.size(); ++s)
        if (scores[s] == best) ties.push_back(static_cast<int>(s));
    return ties[stream.next_below(ties.size())];
}

void decision_statistic_moments(const BeamParams& beam_true, const BeamParams& assumed,
                                const ArrayGeometry& geom, double& mu_v,
                                double& sigma_v) {
    const ReceiverWeights w = build_weights(assumed, geom);
    const double bg = beam_true.lambda_n * geom.cell_area();
    std::vector<double> lams(geom.cell_count());
    fill_cell_means(beam_true, geom, lams);
    double mu = 0.0, var = 0.0;
    for (int m = 0; m < geom.cell_count(); ++m) {
        const double s = lams[m] - bg;  // signal-only mean at the true center
        mu += w.alpha[m] * s;
        var += w.alpha[m] * w.alpha[m] * (s + 2.0 * bg);
    }
    mu_v = mu;
    sigma_v = std::sqrt(var);
}

namespace {

double gaussian_symbol_error(double mu_v, double sigma_v, int order) {
    // Degenerate all-zero-weight receiver: V = 0, take the Phi(0) limit.
    const double ratio = mu_v == 0.0 ? 0.0
                         : sigma_v > 0.0
                             ? mu_v / sigma_v
                             : std::numeric_limits<double>::infinity();
    const double p_v_positive = 1.0 - std_normal_cdf(-ratio);
    return 1.0 - std::pow(p_v_positive, order - 1);
}

}  // namespace

ErrorProbResult symbol_error_gaussian(const BeamParams& beam_true,
                                      const BeamParams& assumed,
                                      const ArrayGeometry& geom, int order) {
    if (order < 2) throw std::invalid_argument("symbol_error_gaussian: order must be >= 2");
    ErrorProbResult out;
    out.method = ErrorProbMethod::gaussian_approx;
    decision_statistic_moments(beam_true, assumed, geom, out.mu_v, out.sigma_v);
    out.p_symbol_error = gaussian_symbol_error(out.mu_v, out.sigma_v, order);
    return out;
}

ErrorProbResult symbol_error_mc(const BeamParams& beam_true, const BeamParams& assumed,
                                const ArrayGeometry& geom, int order,
                                std::int64_t trials, RngStream& stream) {
    if (order < 2) throw std::invalid_argument("symbol_error_mc: order must be >= 2");
    if (trials < 1) throw std::invalid_argument("symbol_error_mc: trials must be >= 1");
    const ReceiverWeights w = build_weights(assumed, geom);

    std::int64_t errors = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const int j = static_cast<int>(stream.next_below(order));
        const PpmFrame frame = sample_ppm_frame(beam_true, geom, order, j, stream);
        if (ml_decide(frame, w, stream) != j) ++errors;
    }

    ErrorProbResult out;
    out.method = ErrorProbMethod::monte_carlo;
    out.trials = trials;
    out.p_symbol_error = static_cast<double>(errors) / static_cast<double>(trials);
    out.stderr_est = std::sqrt(out.p_symbol_error * (1.0 - out.p_symbol_error) /
                               static_cast<double>(trials));
    decision_statistic_moments(beam_true, assumed, geom, out.mu_v, out.sigma_v);
    return out;
}

std::vector<LandscapePoint> snr_ratio_landscape(const BeamParams& beam_true,
                                                const ArrayGeometry& geom,
                                                int grid_per_side) {
    if (grid_per_side < 2)
        throw std::invalid_argument("snr_ratio_landscape: grid must be >= 2 per side");
    const double a = geom.half_width();
    const double step = 2.0 * a / (grid_per_side - 1);
    std::vector<LandscapePoint> out;
    out.reserve(static_cast<std::size_t>(grid_per_side) * grid_per_side);
    for (int iy = 0; iy < grid_per_side; ++iy) {
        for (int ix = 0; ix < grid_per_side; ++ix) {
            const double x = -a + ix * step;
            const double y = -a + iy * step;
            double mu = 0.0, sigma = 0.0;
            decision_statistic_moments(beam_true, beam_true.with_center(x, y), geom, mu,
                                       sigma);
            out.push_back({x, y, sigma > 0.0 ? mu / sigma : 0.0});
        }
    }
    return out;
}

LandscapePoint landscape_argmax(const std::vector<LandscapePoint>& grid) {
    if (grid.empty()) throw std::invalid_argument("landscape_argmax: empty grid");
    LandscapePoint best = grid.front();
    for (const auto& p : grid)
        if (p.ratio > best.ratio) best = p;
    return best;
}

}  // namespace beamtrack
