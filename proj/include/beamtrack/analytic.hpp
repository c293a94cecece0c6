#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beamtrack/beam.hpp"
#include "beamtrack/geometry.hpp"

namespace beamtrack {

/// Series-truncation controls for the exact MSE/bias computations. Inner
/// per-cell sums stop once the Poisson(Lambda_u) tail drops below
/// epsilon0 / M!; the outer total-count sum uses the plain epsilon0 budget.
struct TruncationPolicy {
    double epsilon0 = 1e-5;
    int k_max = 2;  // highest tie multiplicity included in the MDC series

    void validate() const;

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

struct TruncationReport {
    std::int64_t eta = 0;        // inclusive upper summation limit used
    double realized_tail = 0.0;  // Poisson tail mass beyond eta
};

/// Probabilities that the maximum count lands in each cell (tie-share
/// weighted), truncated at tie multiplicity k_max.
struct MdcSelection {
    std::vector<double> probability;
    double p_all_zero = 0.0;      // every cell reports zero (degenerate frame)
    double completeness_gap = 0.0;  // 1 - sum(probability) - p_all_zero
    TruncationReport trunc;
};

MdcSelection mdc_selection_probabilities(std::span<const double> lams,
                                         const TruncationPolicy& policy);

/// P({MDC picks cell m}) = sum_{k<=k_max} P_{k,m}.
double mdc_cell_probability(const BeamParams& beam, const ArrayGeometry& geom, int m,
                            const TruncationPolicy& policy);

struct MdcAnalytic {
    double mse = 0.0;
    double bias_x = 0.0;
    double bias_y = 0.0;
    double completeness_gap = 0.0;
    TruncationReport trunc;
};

/// Exact MDC mean-square error and bias from the tie series; all-zero frames
/// contribute with the array-center fallback estimate.
MdcAnalytic mdc_mse_bias(const BeamParams& beam, const ArrayGeometry& geom,
                         const TruncationPolicy& policy);

/// Conditional multinomial moments of the counts given Z_s = z_s, with
/// p_m = Lambda_m / Lambda_s.
struct CentroidMoments {
    double z_s = 0.0;
    std::vector<double> p;

    double mean(int m) const { return z_s * p[m]; }
    double second_moment(int m) const {
        const double mu = z_s * p[m];
        return z_s * p[m] * (1.0 - p[m]) + mu * mu;
    }
    double cross_moment(int m, int n) const {  // m != n
        return z_s * (z_s - 1.0) * p[m] * p[n];
    }
};

CentroidMoments centroid_moments(const BeamParams& beam, const ArrayGeometry& geom,
                                 double z_s);

struct CentroidAnalytic {
    double mse = 0.0;
    double bias_x = 0.0;
    double bias_y = 0.0;
    TruncationReport trunc;
};

/// Exact centroid (or, with scaled_by_K, AUC) mean-square error and bias:
/// outer Poisson(Lambda_s) sum over z_s with conditional multinomial moments;
/// the z_s = 0 term uses the array-center fallback estimate.
CentroidAnalytic centroid_mse_bias(const BeamParams& beam, const ArrayGeometry& geom,
                                   const TruncationPolicy& policy, bool scaled_by_K);

}  // namespace beamtrack
