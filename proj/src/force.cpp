#include "ab/force.hpp"

#include <cmath>
#include <functional>

#include "ab/errors.hpp"
#include "ab/finite.hpp"
#include "ab/ideal.hpp"
#include "ab/parallel.hpp"

namespace ab::force {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Periodic trapezoid rule on a uniform grid: spectrally accurate for the
// smooth 2pi-periodic slope profile.
ForceVector integrate_profile(const CylinderScenario& sc,
                              const std::function<double(double)>& slope, int n)
{
    std::vector<double> sq(static_cast<std::size_t>(n));
    parallel_for(sq.size(), [&](std::size_t i) {
        const double phi = 2.0 * kPi * static_cast<double>(i) / n;
        const double s = slope(phi);
        sq[i] = s * s;
    });
    double fx = 0.0, fy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        fx += sq[static_cast<std::size_t>(i)] * std::cos(phi);
        fy += sq[static_cast<std::size_t>(i)] * std::sin(phi);
    }
    const double w = 0.5 * sc.density * sc.radius * (2.0 * kPi / n);
    ForceVector f;
    f.raw = {w * fx, w * fy};
    const double norm = sc.density * sc.wavenumber;
    f.f1 = f.raw[0] / norm;
    f.f2 = f.raw[1] / norm;
    return f;
}

ForceVector converged_force(const CylinderScenario& sc,
                            const std::function<double(double)>& slope,
                            const QuadratureSpec& quad)
{
    quad.validate();
    const ForceVector a = integrate_profile(sc, slope, quad.n_points);
    const ForceVector b = integrate_profile(sc, slope, 2 * quad.n_points);
    const double scale = std::max({std::abs(b.f1), std::abs(b.f2), 1e-300});
    const double change = std::max(std::abs(a.f1 - b.f1), std::abs(a.f2 - b.f2));
    if (change > 1e-9 * scale)
        throw QuadratureError("force quadrature: doubling the grid moved the result");
    return b;
}

} // namespace

ForceVector force_ideal(const CylinderScenario& sc, double kappa, const QuadratureSpec& quad)
{
    const ideal::BoundarySum bs(sc, kappa);
    return converged_force(sc, [&](double phi) { return bs.slope(phi); }, quad);
}

ForceVector force_finite(const CylinderScenario& sc, const QuadratureSpec& quad)
{
    const finite::FiniteSolution sol(sc);
    return converged_force(sc, [&](double phi) { return sol.slope(phi); }, quad);
}

ForceVector force_asymptotic(double alpha, double k, double rho)
{
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw InputError("force_asymptotic: alpha must lie in [0, 1)");
    if (!(k > 0.0) || !(rho > 0.0))
        throw InputError("force_asymptotic: k and rho must be positive");
    const double s = std::sin(kPi * alpha);
    ForceVector f;
    f.f1 = -2.0 * s * s;
    f.f2 = std::sin(2.0 * kPi * alpha);
    f.raw = {rho * k * f.f1, rho * k * f.f2};
    return f;
}

SymmetryReport force_symmetry_report(std::span<const double> kR_list,
                                     std::span<const double> alpha_list,
                                     const QuadratureSpec& quad)
{
    if (kR_list.empty() || alpha_list.empty())
        throw InputError("force_symmetry_report: empty grid");
    SymmetryReport rep;
    for (double kR : kR_list) {
        CylinderScenario sc;
        sc.radius = 1.0;
        sc.wavenumber = kR;
        std::vector<ForceVector> at_alpha(alpha_list.size());
        std::vector<ForceVector> at_mirror(alpha_list.size());
        for (std::size_t i = 0; i < alpha_list.size(); ++i) {
            const double a = alpha_list[i];
            at_alpha[i] = force_ideal(sc, a, quad);
            const double am = a == 0.0 ? 0.0 : 1.0 - a;
            at_mirror[i] = force_ideal(sc, am, quad);
            rep.rows.push_back({kR, a, at_alpha[i].f1, at_alpha[i].f2});
            rep.max_f1_defect =
                std::max(rep.max_f1_defect, std::abs(at_alpha[i].f1 - at_mirror[i].f1));
            rep.max_f2_defect =
                std::max(rep.max_f2_defect, std::abs(at_alpha[i].f2 + at_mirror[i].f2));
            if (std::abs(kR - 1.0) < 1e-12 && std::abs(at_alpha[i].f1) > 0.0)
                rep.f2_over_f1_at_kR1 = std::max(
                    rep.f2_over_f1_at_kR1, std::abs(at_alpha[i].f2 / at_alpha[i].f1));
        }
    }
    return rep;
}

} // namespace ab::force
