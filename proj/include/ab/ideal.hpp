#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ab/scenario.hpp"

namespace ab::ideal {

// Hard-wall scattering with dummy-field parameter kappa in [0, 1).
// The exterior solution is the partial-wave series
//   psi(r, phi) = sum_n (-i)^{|n+kappa|} e^{i n (phi+pi)}
//                 [ J_{|n+kappa|}(kr) - J_{|n+kappa|}(kR)/H_{|n+kappa|}(kR)
//                   * H_{|n+kappa|}(kr) ],
// normalized so the incident wave tends to e^{i k x - i kappa (phi - pi)}
// around the backward direction.

// Cached boundary data for fixed (scenario, kappa): the slope series
// coefficients (-i)^{|n+kappa|} / H_{|n+kappa|}(kR).  Building it costs the
// Bessel evaluations once; slope(phi) is then a short complex sum.
class BoundarySum {
public:
    BoundarySum(const CylinderScenario& sc, double kappa);

    // d_r |psi|(R, phi) = 2/(pi R) |sum_n c_n e^{i n (phi+pi)}|
    double slope(double phi) const;

    const SeriesTruncation& truncation() const { return trunc_; }
    double kappa() const { return kappa_; }

private:
    double radius_;
    double kappa_;
    std::vector<std::complex<double>> pos_; // c_0, c_1, ...
    std::vector<std::complex<double>> neg_; // c_{-1}, c_{-2}, ...
    double coef_abs_sum_ = 0.0;
    SeriesTruncation trunc_;
};

// Exterior wavefunction, r >= R.  Throws RangeError for r < R,
// TruncationError if the tail bound 1e-12 |sum| cannot be met.
std::complex<double> psi(const CylinderScenario& sc, double kappa, double r, double phi);

// Boundary slope via the closed form (Wronskian-reduced series).
double slope(const CylinderScenario& sc, double kappa, double phi);

// Vectorized slope over an angle grid (strictly increasing, in [0, 2pi)).
SlopeProfile slope_profile(const CylinderScenario& sc, double kappa,
                           std::span<const double> angles);

// (-i)^nu on the principal branch: e^{-i pi nu / 2}.
std::complex<double> incident_coefficient(double nu);

// J_nu(kR)/H_nu(kR) with the overflow guard (0 once H leaves double range;
// the true ratio is then below 1e-300).
std::complex<double> wall_ratio(double nu, double x);

} // namespace ab::ideal
