#include "beamtrack/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace beamtrack {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_cdf_diff(double lo, double hi) {
    if (lo > hi) return -std_normal_cdf_diff(hi, lo);
    if (lo >= 0.0)  // both in the upper tail: work with erfc of positive args
        return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
    if (hi <= 0.0)  // both in the lower tail: mirror
        return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
    // Interval straddles 0; no cancellation since the two halves add.
    return 0.5 * (std::erf(hi * kInvSqrt2) - std::erf(lo * kInvSqrt2));
}

double regularized_gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a, x);
}

double regularized_gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(a, x);
}

double poisson_upper_tail(std::int64_t k, double mean) {
    if (k <= 0) return 1.0;
    if (mean <= 0.0) return 0.0;
    // P({Z >= k}) equals the regularized lower gamma P(k, mean).
    return regularized_gamma_p(static_cast<double>(k), mean);
}

double poisson_log_pmf(std::int64_t k, double mean) {
    if (k < 0) return -std::numeric_limits<double>::infinity();
    if (mean <= 0.0)
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

std::int64_t poisson_tail_cutoff(double mean, double budget) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson_tail_cutoff: bad mean");
    if (!(budget > 0.0)) budget = 1e-300;
    budget = std::max(budget, 1e-300);
    std::int64_t lo = 1;
    std::int64_t hi = static_cast<std::int64_t>(mean + 10.0 * std::sqrt(mean + 1.0)) + 20;
    while (poisson_upper_tail(hi, mean) >= budget) {
        lo = hi;
        hi *= 2;
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (poisson_upper_tail(mid, mean) < budget)
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

double chi_squared_upper_tail(double stat, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared_upper_tail: dof must be >= 1");
    if (stat <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace beamtrack
