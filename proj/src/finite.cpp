#include "ab/finite.hpp"

#include <algorithm>
#include <cmath>

#include "ab/errors.hpp"
#include "ab/ideal.hpp"
#include "ab/ode.hpp"
#include "ab/parallel.hpp"
#include "ab/specfun.hpp"

namespace ab::finite {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTailRel = 1e-12;

// Riccati right-hand side in t = ln r for state (g, ln f), g = r f'/f:
//   dg/dt   = (n + beta r^2/R^2)^2 - g^2 - (k^2 - 2 V0) r^2
//   dlnf/dt = g
struct RadialRhs {
    double n;
    double beta_over_R2;
    double k2_minus_2V0;

    ode::State<2> operator()(double t, const ode::State<2>& y) const
    {
        const double r2 = std::exp(2.0 * t);
        const double m = n + beta_over_R2 * r2;
        return {m * m - y[0] * y[0] - k2_minus_2V0 * r2, y[0]};
    }
};

RadialRhs make_rhs(const CylinderScenario& sc, int n)
{
    return {static_cast<double>(n), sc.flux_ratio / (sc.radius * sc.radius),
            sc.wavenumber * sc.wavenumber - 2.0 * sc.barrier};
}

void require_finite_barrier(const CylinderScenario& sc)
{
    sc.validate();
    if (sc.infinite_barrier())
        throw InputError("finite model: V0 must be finite (ideal model handles V0 = inf)");
}

// One integration pass.  `radii` must be strictly increasing and lie in
// (r_start, R); the states there land in `at_radii` when given.  Returns
// the state (g, ln f) at R.
ode::State<2> integrate_channel(const CylinderScenario& sc, int n, const RadialGrid& grid,
                                double rtol, std::span<const double> radii = {},
                                std::vector<ode::State<2>>* at_radii = nullptr)
{
    const double t0 = std::log(grid.r_start_factor * sc.radius);
    const double t1 = std::log(sc.radius);
    std::vector<double> cps(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        cps[i] = std::log(radii[i]);

    ode::Options<2> opt;
    opt.rtol = rtol;
    opt.atol = 1e-14;

    ode::State<2> end{};
    if (at_radii)
        at_radii->clear();
    bool first = true;
    try {
        ode::integrate<2>(make_rhs(sc, n), t0, t1, {std::abs(static_cast<double>(n)), 0.0}, cps,
                          opt, [&](double t, const ode::State<2>& y) {
                              if (!first && at_radii && t < t1)
                                  at_radii->push_back(y);
                              first = false;
                              end = y;
                          });
    } catch (const StiffnessError&) {
        throw StiffnessError("interior integration hit a log-derivative pole "
                             "(sub-barrier energy V0 < k^2/2?)");
    }
    return end;
}

} // namespace

double interior_logderiv(const CylinderScenario& sc, int n, const RadialGrid& grid)
{
    require_finite_barrier(sc);
    grid.validate();
    const double g1 = integrate_channel(sc, n, grid, grid.tolerance)[0];
    const double g2 = integrate_channel(sc, n, grid, grid.tolerance / 20.0)[0];
    const double scale = std::max({std::abs(g1), std::abs(g2), 1.0});
    if (std::abs(g1 - g2) > 10.0 * grid.tolerance * scale)
        throw ToleranceError("interior log-derivative did not converge under refinement");
    return g2 / sc.radius;
}

ChannelSolution channel_match(const CylinderScenario& sc, int n, const RadialGrid& grid)
{
    require_finite_barrier(sc);
    const double k = sc.wavenumber;
    const double kR = k * sc.radius;
    const double nu = std::abs(n + sc.flux_ratio);
    const double L = interior_logderiv(sc, n, grid);
    const std::complex<double> c = ideal::incident_coefficient(nu);

    if (specfun::y_overflows(nu, kR)) {
        // |H| is beyond double range, so |s_n| <= |J/H| underflows.
        return {n, nu, L, 0.0, c};
    }
    const auto v = specfun::cyl_jy(nu, kR);
    const std::complex<double> H{v.j, v.y};
    const std::complex<double> Hp{v.jp, v.yp};
    const std::complex<double> den = k * Hp - L * H;
    if (std::abs(den) < 1e-280 * std::max(1.0, std::abs(L)))
        throw DegenerateMatchError("channel match: denominator underflow");
    const std::complex<double> s = -(k * v.jp - L * v.j) / den;
    return {n, nu, L, s, c};
}

FiniteSolution::FiniteSolution(const CylinderScenario& sc, const RadialGrid& grid,
                               double r_max_hint)
    : sc_(sc), grid_(grid)
{
    require_finite_barrier(sc);
    grid.validate();
    const double r_max = r_max_hint > sc.radius ? r_max_hint : 2.0 * sc.radius;
    depth_ = partial_wave_minimum_terms(sc.wavenumber * r_max) + 8;

    auto build = [&](int n) -> Channel {
        const ChannelSolution sol = channel_match(sc_, n, grid_);
        const double kR = sc_.wavenumber * sc_.radius;
        if (specfun::y_overflows(sol.nu_out, kR)) {
            const auto [j, jp] = specfun::bessel_j(sol.nu_out, kR);
            return {sol, sol.c * j, sol.c * sc_.wavenumber * jp};
        }
        const auto v = specfun::cyl_jy(sol.nu_out, kR);
        const std::complex<double> H{v.j, v.y};
        const std::complex<double> Hp{v.jp, v.yp};
        return {sol, sol.c * (v.j + sol.s * H), sol.c * sc_.wavenumber * (v.jp + sol.s * Hp)};
    };

    // Channels are independent: parallel map, slots keyed by n.
    pos_.resize(static_cast<std::size_t>(depth_) + 1);
    neg_.resize(static_cast<std::size_t>(depth_));
    parallel_for(2 * static_cast<std::size_t>(depth_) + 1, [&](std::size_t i) {
        const int n = i <= static_cast<std::size_t>(depth_)
                          ? static_cast<int>(i)
                          : -static_cast<int>(i - static_cast<std::size_t>(depth_));
        if (n >= 0)
            pos_[static_cast<std::size_t>(n)] = build(n);
        else
            neg_[static_cast<std::size_t>(-n - 1)] = build(n);
    });
}

const FiniteSolution::Channel& FiniteSolution::channel(int n) const
{
    return n >= 0 ? pos_[static_cast<std::size_t>(n)] : neg_[static_cast<std::size_t>(-n - 1)];
}

std::complex<double> FiniteSolution::exterior_term(int n, double kr) const
{
    const Channel& ch = channel(n);
    const double nu = ch.sol.nu_out;
    if (specfun::y_overflows(nu, kr)) {
        // s_n H(kr) is below underflow for r >= R once H(kR) left range.
        const auto [j, jp] = specfun::bessel_j(nu, kr);
        return ch.sol.c * j;
    }
    const auto v = specfun::cyl_jy(nu, kr);
    return ch.sol.c * (v.j + ch.sol.s * std::complex<double>{v.j, v.y});
}

std::complex<double> FiniteSolution::psi(double r, double phi) const
{
    const auto grid = psi_polar_grid(std::span<const double>{&r, 1},
                                     std::span<const double>{&phi, 1});
    return grid[0][0];
}

std::vector<std::vector<std::complex<double>>>
FiniteSolution::psi_polar_grid(std::span<const double> radii,
                               std::span<const double> angles) const
{
    const double R = sc_.radius;
    const double k = sc_.wavenumber;
    const double r_start = grid_.r_start_factor * R;

    std::vector<double> interior;
    double kr_max = k * R;
    for (double r : radii) {
        if (!(r > r_start))
            throw RangeError("finite psi: r at or below the interior integration start");
        if (r < R)
            interior.push_back(r);
        else
            kr_max = std::max(kr_max, k * r);
    }
    std::sort(interior.begin(), interior.end());
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
    auto interior_index = [&](double r) {
        return static_cast<std::size_t>(
            std::lower_bound(interior.begin(), interior.end(), r) - interior.begin());
    };

    const int n_min = partial_wave_minimum_terms(kr_max);
    if (n_min > depth_)
        throw RangeError("finite psi: r exceeds the truncation this solution was built for; "
                         "construct with a larger r_max_hint");

    std::vector<std::vector<std::complex<double>>> out(
        radii.size(), std::vector<std::complex<double>>(angles.size(), 0.0));

    // Adds channel n to every grid point; returns its largest magnitude.
    auto add_channel = [&](int n) -> double {
        const Channel& ch = channel(n);
        std::vector<ode::State<2>> at;
        double lnfR = 0.0;
        if (!interior.empty() && std::abs(ch.boundary) > 1e-305) {
            const auto end =
                integrate_channel(sc_, n, grid_, grid_.tolerance, interior, &at);
            lnfR = end[1];
        }
        double mag = 0.0;
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            const double r = radii[ri];
            std::complex<double> value = 0.0;
            if (r < R) {
                if (!at.empty())
                    value = ch.boundary * std::exp(at[interior_index(r)][1] - lnfR);
            } else {
                value = exterior_term(n, k * r);
            }
            mag = std::max(mag, std::abs(value));
            for (std::size_t ai = 0; ai < angles.size(); ++ai)
                out[ri][ai] += value * std::polar(1.0, n * (angles[ai] + kPi));
        }
        return mag;
    };

    add_channel(0);
    int quiet = 0;
    for (int m = 1; m <= depth_; ++m) {
        const double pair_mag = add_channel(m) + add_channel(-m);
        if (m >= n_min) {
            // Anchored at the unit incident amplitude (see ideal::psi).
            quiet = pair_mag <= 0.5 * kTailRel ? quiet + 1 : 0;
            if (quiet >= 2)
                return out;
        }
    }
    throw TruncationError("finite psi: tail bound not met within the built channels");
}

double FiniteSolution::slope(double phi) const
{
    const std::complex<double> e = std::polar(1.0, phi + kPi);
    std::complex<double> ep = 1.0, em = 1.0;
    std::complex<double> p = pos_[0].boundary;
    std::complex<double> dp = pos_[0].dboundary;
    for (std::size_t n = 1; n < pos_.size(); ++n) {
        ep *= e;
        em *= std::conj(e);
        p += pos_[n].boundary * ep + neg_[n - 1].boundary * em;
        dp += pos_[n].dboundary * ep + neg_[n - 1].dboundary * em;
    }
    const double mag = std::abs(p);
    const double dmag = std::abs(dp);
    // Dirichlet-degenerate case: |psi| -> 0 faster than its derivative and
    // the slope of the modulus tends to |d_r psi|.
    if (mag < 1e-14 * dmag * sc_.radius)
        return dmag;
    return (std::conj(p) * dp).real() / mag;
}

double FiniteSolution::boundary_relation_residual(double phi) const
{
    if (!(sc_.barrier >= 1e3 * sc_.wavenumber * sc_.wavenumber))
        throw InputError("boundary relation: requires V0 >= 1e3 k^2");
    const std::complex<double> p = psi(sc_.radius, phi);
    return std::abs(std::sqrt(sc_.barrier) * std::abs(p) - slope(phi) / std::sqrt(2.0));
}

std::vector<ChannelSolution> FiniteSolution::channels() const
{
    std::vector<ChannelSolution> out;
    out.push_back(pos_[0].sol);
    for (std::size_t n = 1; n < pos_.size(); ++n) {
        out.push_back(pos_[n].sol);
        out.push_back(neg_[n - 1].sol);
    }
    return out;
}

SeriesTruncation FiniteSolution::truncation() const
{
    const double tail = std::abs(pos_.back().boundary) + std::abs(neg_.back().boundary);
    return {depth_, tail};
}

std::complex<double> finite_psi(const CylinderScenario& sc, double r, double phi)
{
    return FiniteSolution(sc, {}, std::max(r, 2.0 * sc.radius)).psi(r, phi);
}

double finite_slope(const CylinderScenario& sc, double phi)
{
    return FiniteSolution(sc).slope(phi);
}

double boundary_relation_check(const CylinderScenario& sc, double phi)
{
    return FiniteSolution(sc).boundary_relation_residual(phi);
}

} // namespace ab::finite
