#pragma once

#include <cmath>
#include <stdexcept>

namespace beamtrack {

// Planck constant and vacuum light speed used by the photon-count scaling.
inline constexpr double kPlanck = 6.62607004e-34;
inline constexpr double kLightSpeed = 3.0e8;

/// Gaussian beam under the scaled-intensity convention: I0 and lambda_n are
/// stored as expected photon counts per slot (peak count density I0/rho^2,
/// background lambda_n per unit area). A fully captured beam contributes
/// 2*pi*I0 expected photons.
struct BeamParams {
    double I0 = 1.0;        // scaled peak-intensity scale
    double rho = 0.2;       // beam radius [m]
    double x0 = 0.0;        // beam center [m]
    double y0 = 0.0;
    double lambda_n = 0.0;  // scaled background intensity [1/m^2]

    void validate() const {
        if (!(I0 >= 0.0)) throw std::invalid_argument("BeamParams: I0 must be >= 0");
        if (!(rho > 0.0)) throw std::invalid_argument("BeamParams: rho must be > 0");
        if (!(lambda_n >= 0.0))
            throw std::invalid_argument("BeamParams: lambda_n must be >= 0");
    }

    BeamParams with_center(double x, double y) const {
        BeamParams b = *this;
        b.x0 = x;
        b.y0 = y;
        return b;
    }
};

/// Physical-link parameters; the only place physical units enter the model.
struct LinkBudget {
    double rho0;          // beam waist [m]
    double wavelength;    // [m]
    double distance;      // link distance d [m]
    double slot_seconds;  // observation/pulse slot duration T_s [s]
    double efficiency;    // photoconversion efficiency eta, in (0, 1]

    void validate() const {
        if (!(rho0 > 0.0) || !(wavelength > 0.0) || !(slot_seconds > 0.0))
            throw std::invalid_argument("LinkBudget: rho0/wavelength/slot must be > 0");
        if (!(distance >= 0.0))
            throw std::invalid_argument("LinkBudget: distance must be >= 0");
        if (!(efficiency > 0.0 && efficiency <= 1.0))
            throw std::invalid_argument("LinkBudget: efficiency must be in (0, 1]");
    }
};

/// Spot size rho(d) = rho0 * sqrt(1 + (lambda*d / (pi*rho0^2))^2).
inline double spot_size(double rho0, double wavelength, double d) {
    if (!(rho0 > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("spot_size: rho0 and wavelength must be > 0");
    if (!(d >= 0.0)) throw std::invalid_argument("spot_size: distance must be >= 0");
    const double q = wavelength * d / (M_PI * rho0 * rho0);
    return rho0 * std::sqrt(1.0 + q * q);
}

/// Beam intensity density at (x, y): I0/rho^2 * exp(-r^2 / (2 rho^2)).
inline double intensity_at(const BeamParams& beam, double x, double y) {
    const double dx = x - beam.x0;
    const double dy = y - beam.y0;
    return beam.I0 / (beam.rho * beam.rho) *
           std::exp(-(dx * dx + dy * dy) / (2.0 * beam.rho * beam.rho));
}

/// Converts optical power [W] into an expected photon count per slot:
/// P * eta * T_s / (h c / lambda).
inline double scaled_intensity_from_power(const LinkBudget& link, double power_watts) {
    link.validate();
    if (!(power_watts >= 0.0))
        throw std::invalid_argument("scaled_intensity_from_power: power must be >= 0");
    return power_watts * link.efficiency * link.slot_seconds * link.wavelength /
           (kPlanck * kLightSpeed);
}

}  // namespace beamtrack
