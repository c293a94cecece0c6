#pragma once

#include <cstdint>

namespace beamtrack {

/// Standard normal distribution function Phi(x).
double std_normal_cdf(double x);

/// Phi(hi) - Phi(lo) for lo <= hi, evaluated on the tail side so the
/// difference keeps relative accuracy when both arguments sit far from 0.
double std_normal_cdf_diff(double lo, double hi);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double regularized_gamma_p(double a, double x);

/// P({Z >= k}) for Z ~ Poisson(mean), integer k >= 0.
double poisson_upper_tail(std::int64_t k, double mean);

/// ln P({Z = k}) for Z ~ Poisson(mean).
double poisson_log_pmf(std::int64_t k, double mean);

/// Smallest eta such that P({Poisson(mean) >= eta}) < budget. Budgets below
/// the double range are clamped to 1e-300.
std::int64_t poisson_tail_cutoff(double mean, double budget);

/// P({X >= stat}) for X ~ chi-squared with dof degrees of freedom.
double chi_squared_upper_tail(double stat, int dof);

}  // namespace beamtrack
