#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ab/errors.hpp"

namespace ab {

// Physical setup in natural units (hbar = m_e = 1, E = k^2/2).  All
// reported observables are dimensionless after scaling by R and k.
struct CylinderScenario {
    double radius = 1.0;     // R > 0
    double wavenumber = 1.0; // k > 0
    double flux_ratio = 0.0; // beta = e Phi / h >= 0
    double barrier = std::numeric_limits<double>::infinity(); // V0 >= 0 or inf
    double density = 1.0;    // rho > 0 (beam density)

    // alpha = beta - floor(beta) in [0, 1)
    double alpha() const { return flux_ratio - std::floor(flux_ratio); }

    bool infinite_barrier() const { return std::isinf(barrier); }

    void validate() const
    {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw InputError("scenario: R must be positive and finite");
        if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
            throw InputError("scenario: k must be positive and finite");
        if (!(flux_ratio >= 0.0) || !std::isfinite(flux_ratio))
            throw InputError("scenario: beta must be >= 0 and finite");
        if (!(barrier >= 0.0) || std::isnan(barrier))
            throw InputError("scenario: V0 must be >= 0 (possibly infinite)");
        if (!(density > 0.0) || !std::isfinite(density))
            throw InputError("scenario: rho must be positive and finite");
    }
};

// Truncation record for the partial-wave sums.
struct SeriesTruncation {
    int n_max = 0;          // highest |n| retained
    double tail_bound = 0.0; // magnitude estimate of the first omitted term
};

// Sampled boundary slope d_r|psi|(R, phi) over an angle grid.
struct SlopeProfile {
    std::vector<double> angles; // phi in [0, 2pi), strictly increasing
    std::vector<double> slopes; // >= 0, same length
};

// Minimum retained |n| for a partial-wave sum evaluated out to radius r:
// n >= k r covers the oscillatory Bessel regime, the cube-root term the
// Airy transition zone.
inline int partial_wave_minimum_terms(double kr)
{
    return static_cast<int>(std::ceil(kr + 10.0 * std::cbrt(kr))) + 20;
}

} // namespace ab
