#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ab/scenario.hpp"

namespace ab::finite {

// Finite barrier V0 Theta(R-r) with a homogeneous interior field.  Each
// canonical-angular-momentum channel n solves the radial equation
//   f'' + f'/r + [k^2 - 2 V0 - (n + beta r^2/R^2)^2 / r^2] f = 0
// inside, matched at R to J_nu(kr) + s_n H_nu(kr) with nu = |n + beta|.

struct ChannelSolution {
    int n;                   // canonical angular momentum index
    double nu_out;           // |n + beta|
    double logderiv;         // L = f'(R)/f(R), units 1/length
    std::complex<double> s;  // outgoing coefficient s_n
    std::complex<double> c;  // incident coefficient (-i)^{nu_out}
};

struct RadialGrid {
    double r_start_factor = 1e-6; // r_start = factor * R
    double tolerance = 1e-10;     // relative ODE tolerance

    void validate() const
    {
        if (!(r_start_factor > 0.0 && r_start_factor < 1.0))
            throw InputError("radial grid: r_start must satisfy 0 < r_start < R");
        if (!(tolerance > 0.0 && tolerance <= 1e-6))
            throw InputError("radial grid: tolerance must lie in (0, 1e-6]");
    }
};

// Interior log-derivative L = f'(R)/f(R).  Integrates the Riccati form in
// t = ln r from the regular behavior f ~ r^{|n|}; verified by a second
// pass at tightened tolerance (ToleranceError if the two disagree beyond
// 10x tolerance).  StiffnessError if the log-derivative hits a pole.
double interior_logderiv(const CylinderScenario& sc, int n, const RadialGrid& grid = {});

// Full matching data for channel n.
ChannelSolution channel_match(const CylinderScenario& sc, int n, const RadialGrid& grid = {});

// Assembled scattering solution for a finite-barrier scenario.  Channels
// are built eagerly at construction out to the truncation needed for radii
// up to r_max_hint (default 2R); all accessors are then read-only and safe
// to call concurrently.
class FiniteSolution {
public:
    explicit FiniteSolution(const CylinderScenario& sc, const RadialGrid& grid = {},
                            double r_max_hint = 0.0);

    // Wavefunction anywhere with r_start < r <= r_max_hint (interior
    // continuation below R).
    std::complex<double> psi(double r, double phi) const;

    // d_r |psi| at R+ from the exterior series: Re(conj(psi) d_r psi)/|psi|,
    // falling back to |d_r psi| in the Dirichlet-degenerate limit.
    double slope(double phi) const;

    // | sqrt(V0) |psi(R,phi)| - slope(phi)/sqrt(2) |  (natural units).
    double boundary_relation_residual(double phi) const;

    // psi on a polar grid; interior radii cost one ODE sweep per channel
    // instead of one per point.
    std::vector<std::vector<std::complex<double>>>
    psi_polar_grid(std::span<const double> radii, std::span<const double> angles) const;

    std::vector<ChannelSolution> channels() const;
    SeriesTruncation truncation() const;
    const CylinderScenario& scenario() const { return sc_; }

private:
    struct Channel {
        ChannelSolution sol;
        std::complex<double> boundary;   // c_n (J + s H)(kR)
        std::complex<double> dboundary;  // c_n k (J' + s H')(kR)
    };

    const Channel& channel(int n) const; // n in [-depth, depth]
    std::complex<double> exterior_term(int n, double kr) const;

    CylinderScenario sc_;
    RadialGrid grid_;
    int depth_ = 0;              // channels built for |n| <= depth_
    std::vector<Channel> pos_;   // n = 0, 1, ..., depth_
    std::vector<Channel> neg_;   // n = -1, ..., -depth_
};

// Convenience single-shot wrappers (each builds a FiniteSolution).
std::complex<double> finite_psi(const CylinderScenario& sc, double r, double phi);
double finite_slope(const CylinderScenario& sc, double phi);
double boundary_relation_check(const CylinderScenario& sc, double phi);

} // namespace ab::finite
