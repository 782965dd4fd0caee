#pragma once

#include <numbers>
#include <stdexcept>

namespace gridlight::units {

/// Grid-natural unit system: action quantum h, hop speed c, node spacing
/// and tick duration are all 1. Everything downstream is node counts and
/// ticks.
struct GridUnits {
    static constexpr double h = 1.0;
    static constexpr double c = 1.0;
    static constexpr double planck_length = 1.0;
    static constexpr double planck_time = 1.0;
    static constexpr double hbar = h / (2.0 * std::numbers::pi);
};

// The two-node wavelength is the top of the spectrum; anything shorter
// has no grid representation.
inline constexpr double kMinWavelength = 2.0;

inline void require_wavelength(double lambda) {
    if (!(lambda >= kMinWavelength)) {
        throw std::domain_error("wavelength below the two-node minimum");
    }
}

/// f = c / lambda, cycles per tick.
inline double frequency_of(double lambda) {
    require_wavelength(lambda);
    return GridUnits::c / lambda;
}

/// E = h * f = h * c / lambda, in h-units.
inline double energy_of(double lambda) {
    require_wavelength(lambda);
    return GridUnits::h * GridUnits::c / lambda;
}

/// p = h / lambda.
inline double momentum_of(double lambda) {
    require_wavelength(lambda);
    return GridUnits::h / lambda;
}

/// Fraction of the whole program each of the lambda nodes runs per tick.
inline double node_processing_share(double lambda) {
    require_wavelength(lambda);
    return 1.0 / lambda;
}

/// sigma_x * sigma_p >= hbar/2, with a small absolute tolerance so
/// boundary packets register as satisfying the bound.
inline bool uncertainty_satisfied(double sigma_x, double sigma_p) {
    if (sigma_x < 0.0 || sigma_p < 0.0) {
        throw std::domain_error("spreads must be non-negative");
    }
    constexpr double tol = 1e-9;
    return sigma_x * sigma_p >= GridUnits::hbar / 2.0 - tol;
}

} // namespace gridlight::units
