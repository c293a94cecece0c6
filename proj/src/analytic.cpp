#include "beamtrack/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamtrack/model.hpp"
#include "beamtrack/special.hpp"

namespace beamtrack {

void TruncationPolicy::validate() const {
    if (!(epsilon0 > 0.0))
        throw std::invalid_argument("TruncationPolicy: epsilon0 must be > 0");
    if (k_max < 1) throw std::invalid_argument("TruncationPolicy: k_max must be >= 1");
}

namespace {

// Per-z ingredients of the tie series: log pmf, log CDF-below factors, and
// the count of cells whose Q underflowed to zero.
struct ZSlice {
    std::vector<double> log_pmf;
    std::vector<double> log_q;
    std::vector<bool> q_zero;
    double log_q_sum = 0.0;  // over cells with q > 0
    int zero_count = 0;
};

void fill_slice(ZSlice& s, std::int64_t z, std::span<const double> lams) {
    const int m_count = static_cast<int>(lams.size());
    s.log_pmf.resize(m_count);
    s.log_q.resize(m_count);
    s.q_zero.assign(m_count, false);
    s.log_q_sum = 0.0;
    s.zero_count = 0;
    for (int i = 0; i < m_count; ++i) {
        s.log_pmf[i] = poisson_log_pmf(z, lams[i]);
        const double q = regularized_gamma_q(static_cast<double>(z), lams[i]);
        if (q > 0.0) {
            s.log_q[i] = std::log(q);
            s.log_q_sum += s.log_q[i];
        } else {
            s.log_q[i] = -std::numeric_limits<double>::infinity();
            s.q_zero[i] = true;
            ++s.zero_count;
        }
    }
}

// Adds, for every member cell of each tie set of size k containing `m`, the
// 1/k-weighted probability that those k cells share the maximum value z.
// `tie` holds the current tie set (always containing m); `next` is the
// smallest candidate index for the remaining partners, chosen above m's
// enumeration to visit each unordered partner set once.
void accumulate_ties(const ZSlice& s, int m, int k_remaining, int next,
                     double log_joint_pmf, int zeros_in_tie, int tie_size,
                     std::vector<double>& out) {
    if (k_remaining == 0) {
        if (s.zero_count - zeros_in_tie > 0) return;  // some excluded cell has Q = 0
        double log_excl = s.log_q_sum;
        // remove tie members from the Q product (zero-Q members contributed
        // nothing to log_q_sum, so only finite ones are subtracted in caller)
        out[m] += std::exp(log_joint_pmf + log_excl) / static_cast<double>(tie_size);
        return;
    }
    const int m_count = static_cast<int>(s.log_pmf.size());
    for (int j = next; j < m_count; ++j) {
        if (j == m) continue;
        accumulate_ties(s, m, k_remaining - 1, j + 1,
                        log_joint_pmf + s.log_pmf[j] -
                            (s.q_zero[j] ? 0.0 : s.log_q[j]),
                        zeros_in_tie + (s.q_zero[j] ? 1 : 0), tie_size, out);
    }
}

}  // namespace

MdcSelection mdc_selection_probabilities(std::span<const double> lams,
                                         const TruncationPolicy& policy) {
    policy.validate();
    const int m_count = static_cast<int>(lams.size());
    if (m_count < 1)
        throw std::invalid_argument("mdc_selection_probabilities: empty cell list");

    MdcSelection result;
    result.probability.assign(m_count, 0.0);

    double lam_total = 0.0, lam_max = 0.0;
    for (double lam : lams) {
        if (!(lam >= 0.0))
            throw std::invalid_argument("mdc_selection_probabilities: negative mean");
        lam_total += lam;
        lam_max = std::max(lam_max, lam);
    }
    result.p_all_zero = std::exp(-lam_total);
    if (lam_max == 0.0) {
        result.trunc = {1, 0.0};
        return result;
    }

    // Inner-sum budget epsilon0 / M!, evaluated in logs so large M cannot
    // overflow; poisson_tail_cutoff clamps budgets below the double range.
    const double log_budget =
        std::log(policy.epsilon0) - std::lgamma(static_cast<double>(m_count) + 1.0);
    const double budget = std::exp(std::max(log_budget, std::log(1e-300)));
    const std::int64_t eta = poisson_tail_cutoff(lam_max, budget);
    result.trunc = {eta, poisson_upper_tail(eta + 1, lam_max)};

    const int k_cap = std::min(policy.k_max, m_count);
    ZSlice slice;
    for (std::int64_t z = 1; z <= eta; ++z) {
        fill_slice(slice, z, lams);
        for (int m = 0; m < m_count; ++m) {
            const double base =
                slice.log_pmf[m] - (slice.q_zero[m] ? 0.0 : slice.log_q[m]);
            const int base_zero = slice.q_zero[m] ? 1 : 0;
            for (int k = 1; k <= k_cap; ++k)
                accumulate_ties(slice, m, k - 1, 0, base, base_zero, k,
                                result.probability);
        }
    }

    double mass = result.p_all_zero;
    for (double p : result.probability) mass += p;
    result.completeness_gap = std::max(0.0, 1.0 - mass);
    return result;
}

double mdc_cell_probability(const BeamParams& beam, const ArrayGeometry& geom, int m,
                            const TruncationPolicy& policy) {
    if (m < 0 || m >= geom.cell_count())
        throw std::out_of_range("mdc_cell_probability: cell index out of range");
    const std::vector<double> lams = cell_means(beam, geom);
    return mdc_selection_probabilities(lams, policy).probability[m];
}

MdcAnalytic mdc_mse_bias(const BeamParams& beam, const ArrayGeometry& geom,
                         const TruncationPolicy& policy) {
    const std::vector<double> lams = cell_means(beam, geom);
    const MdcSelection sel = mdc_selection_probabilities(lams, policy);

    MdcAnalytic out;
    out.completeness_gap = sel.completeness_gap;
    out.trunc = sel.trunc;
    for (int m = 0; m < geom.cell_count(); ++m) {
        const double dx = geom.cell_center_x(m) - beam.x0;
        const double dy = geom.cell_center_y(m) - beam.y0;
        out.mse += (dx * dx + dy * dy) * sel.probability[m];
        out.bias_x += dx * sel.probability[m];
        out.bias_y += dy * sel.probability[m];
    }
    // All-zero frames fall back to the array center (0, 0).
    out.mse += (beam.x0 * beam.x0 + beam.y0 * beam.y0) * sel.p_all_zero;
    out.bias_x += -beam.x0 * sel.p_all_zero;
    out.bias_y += -beam.y0 * sel.p_all_zero;
    return out;
}

CentroidMoments centroid_moments(const BeamParams& beam, const ArrayGeometry& geom,
                                 double z_s) {
    if (!(z_s >= 0.0))
        throw std::invalid_argument("centroid_moments: z_s must be >= 0");
    CentroidMoments mom;
    mom.z_s = z_s;
    mom.p = cell_means(beam, geom);
    double lam_s = 0.0;
    for (double lam : mom.p) lam_s += lam;
    if (!(lam_s > 0.0))
        throw std::domain_error("centroid_moments: Lambda_s must be > 0");
    for (double& p : mom.p) p /= lam_s;
    return mom;
}

CentroidAnalytic centroid_mse_bias(const BeamParams& beam, const ArrayGeometry& geom,
                                   const TruncationPolicy& policy, bool scaled_by_K) {
    policy.validate();
    const std::vector<double> lams = cell_means(beam, geom);
    double lam_s = 0.0;
    for (double lam : lams) lam_s += lam;

    CentroidAnalytic out;
    if (lam_s == 0.0) {  // every frame is all-zero: estimate is always (0, 0)
        out.mse = beam.x0 * beam.x0 + beam.y0 * beam.y0;
        out.bias_x = -beam.x0;
        out.bias_y = -beam.y0;
        out.trunc = {0, 0.0};
        return out;
    }

    double scale = 1.0;
    if (scaled_by_K) {
        if (!(beam.I0 > 0.0))
            throw std::invalid_argument("centroid_mse_bias: AUC scaling needs I0 > 0");
        scale = lam_s / (2.0 * M_PI * beam.I0);
    }

    // First and second moments of the cell-center distribution p_m.
    double sx = 0.0, sy = 0.0, sx2 = 0.0, sy2 = 0.0;
    for (int m = 0; m < geom.cell_count(); ++m) {
        const double p = lams[m] / lam_s;
        const double cx = geom.cell_center_x(m);
        const double cy = geom.cell_center_y(m);
        sx += cx * p;
        sy += cy * p;
        sx2 += cx * cx * p;
        sy2 += cy * cy * p;
    }

    const std::int64_t eta = poisson_tail_cutoff(lam_s, policy.epsilon0);
    out.trunc = {eta, poisson_upper_tail(eta + 1, lam_s)};

    // E[est_x^2 | z_s] = (scale*sx)^2 (1 - 1/z_s) + scale^2 sx2 / z_s, the
    // closed form of the multinomial double sum in the conditional MSE.
    const double p0 = std::exp(-lam_s);
    double mse = p0 * (beam.x0 * beam.x0 + beam.y0 * beam.y0);
    const double mean_sq = scale * scale * (sx * sx + sy * sy);
    const double spread = scale * scale * (sx2 + sy2);
    const double cross = -2.0 * (beam.x0 * scale * sx + beam.y0 * scale * sy) +
                         beam.x0 * beam.x0 + beam.y0 * beam.y0;
    for (std::int64_t z = 1; z <= eta; ++z) {
        const double pmf = std::exp(poisson_log_pmf(z, lam_s));
        if (pmf == 0.0) continue;
        const double zd = static_cast<double>(z);
        mse += pmf * (mean_sq * (1.0 - 1.0 / zd) + spread / zd + cross);
    }
    out.mse = mse;

    // E[est | z_s] does not depend on z_s, so the bias sums in closed form.
    out.bias_x = scale * sx * (1.0 - p0) - beam.x0;
    out.bias_y = scale * sy * (1.0 - p0) - beam.y0;
    return out;
}

}  // namespace beamtrack
