#pragma once

#include <array>
#include <span>
#include <vector>

#include "ab/scenario.hpp"

namespace ab::force {

// Surface-integral forces per unit cylinder length,
//   F = (1/2) rho Int_0^{2pi} R dphi [d_r|psi|(R,phi)]^2 (cos phi, sin phi)
// in natural units (hbar = m = 1).  f1/f2 are normalized by rho k so the
// small-kR law reads (-2 sin^2(pi alpha), sin(2 pi alpha)).

struct ForceVector {
    double f1 = 0.0;               // backward (x) component / (rho k)
    double f2 = 0.0;               // perpendicular (y) component / (rho k)
    std::array<double, 2> raw{};   // unnormalized force per unit length
};

struct QuadratureSpec {
    int n_points = 512; // power of two >= 64

    void validate() const
    {
        if (n_points < 64 || (n_points & (n_points - 1)) != 0)
            throw InputError("quadrature: n_points must be a power of two >= 64");
    }
};

// Hard-wall force at dummy-field parameter kappa.  QuadratureError if
// doubling the grid moves the result by more than 1e-9 relative.
ForceVector force_ideal(const CylinderScenario& sc, double kappa,
                        const QuadratureSpec& quad = {});

// Finite-barrier force from the finite_slope profile; converges to
// force_ideal at kappa = frac(beta) as V0 -> infinity.
ForceVector force_finite(const CylinderScenario& sc, const QuadratureSpec& quad = {});

// Small-kR closed form: rho k (-2 sin^2(pi alpha), sin(2 pi alpha)).
ForceVector force_asymptotic(double alpha, double k, double rho);

struct SymmetryRow {
    double kR;
    double alpha;
    double f1;
    double f2;
};

struct SymmetryReport {
    std::vector<SymmetryRow> rows;
    double max_f1_defect = 0.0;   // max |f1(a) - f1(1-a)|
    double max_f2_defect = 0.0;   // max |f2(a) + f2(1-a)|
    double f2_over_f1_at_kR1 = 0.0; // |f2/f1| at kR ~ 1 (0 if kR=1 absent)
};

// Force table over a (kR, alpha) grid with the alpha <-> 1-alpha symmetry
// defects.
SymmetryReport force_symmetry_report(std::span<const double> kR_list,
                                     std::span<const double> alpha_list,
                                     const QuadratureSpec& quad = {});

} // namespace ab::force
