#include <doctest.h>

#include <cmath>
#include <complex>

#include "ab/errors.hpp"
#include "ab/specfun.hpp"
#include "oracles.hpp"

using namespace ab;
using specfun::cyl_jy;

namespace {
#include "specfun_reference.inc"

constexpr double kPi = 3.14159265358979323846;

double rel(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}
} // namespace

TEST_CASE("reference grid across both evaluation regimes")
{
    for (const RefRow& r : kReference) {
        CAPTURE(r.nu);
        CAPTURE(r.x);
        const auto v = cyl_jy(r.nu, r.x);
        // Mixed tolerance: strict relative away from zeros, scale-anchored
        // near them (a zero crossing has no meaningful relative error).
        const double scale = std::max(std::abs(r.j), std::abs(r.y));
        const double dscale = std::max(std::abs(r.jp), std::abs(r.yp));
        CHECK(std::abs(v.j - r.j) <= 1e-10 * std::max(std::abs(r.j), 1e-4 * scale));
        CHECK(std::abs(v.y - r.y) <= 1e-9 * std::max(std::abs(r.y), 1e-4 * scale));
        CHECK(std::abs(v.jp - r.jp) <= 1e-9 * std::max(std::abs(r.jp), 1e-4 * dscale));
        CHECK(std::abs(v.yp - r.yp) <= 1e-9 * std::max(std::abs(r.yp), 1e-4 * dscale));
    }
}

TEST_CASE("J at the origin limit and half order")
{
    CHECK(rel(cyl_jy(0.0, 1e-8).j, 1.0) < 1e-10);
    // J_{1/2}(x) = sqrt(2/(pi x)) sin x  ->  J_{1/2}(pi/2) = 2/pi
    CHECK(rel(cyl_jy(0.5, kPi / 2).j, 2.0 / kPi) < 1e-12);
}

TEST_CASE("J against the compensated series oracle")
{
    const double nu = 0.3, x = 4.3e-3;
    const auto [j, jp] = specfun::bessel_j(nu, x);
    CHECK(rel(j, oracle::bessel_j_series(nu, x, 30)) < 1e-10);
    CHECK(rel(jp, oracle::bessel_j_series_derivative(nu, x, 30)) < 1e-10);
    // a second point deeper in the series regime
    CHECK(rel(specfun::bessel_j(7.0, 1.2).first, oracle::bessel_j_series(7.0, 1.2)) < 1e-11);
}

TEST_CASE("J derivative recurrence J'_nu = J_{nu-1} - (nu/x) J_nu")
{
    for (double nu : {1.3, 2.0, 5.75, 40.0}) {
        for (double x : {0.7, 1.9, 6.1, 33.0}) {
            const auto [j, jp] = specfun::bessel_j(nu, x);
            const auto [jm, jmp] = specfun::bessel_j(nu - 1.0, x);
            const double want = jm - (nu / x) * j;
            CHECK(std::abs(jp - want) <=
                  1e-9 * std::max({std::abs(jp), std::abs(jm), std::abs(j)}));
        }
    }
}

TEST_CASE("Y: half-order closed forms to 1e-11")
{
    // Y_{1/2} = -sqrt(2/(pi x)) cos x,  J_{3/2}, Y_{3/2} likewise closed.
    for (double x : {0.3, 0.7, 1.1, 2.2, 5.5, 9.3, 20.1, 61.7}) {
        const double amp = std::sqrt(2.0 / (kPi * x));
        const double j12 = amp * std::sin(x);
        const double y12 = -amp * std::cos(x);
        const double j32 = amp * (std::sin(x) / x - std::cos(x));
        const double y32 = -amp * (std::cos(x) / x + std::sin(x));
        if (std::abs(j12) > 0.05 * amp)
            CHECK(rel(cyl_jy(0.5, x).j, j12) < 1e-11);
        if (std::abs(y12) > 0.05 * amp)
            CHECK(rel(cyl_jy(0.5, x).y, y12) < 1e-11);
        if (std::abs(j32) > 0.05 * amp)
            CHECK(rel(cyl_jy(1.5, x).j, j32) < 1e-11);
        if (std::abs(y32) > 0.05 * amp)
            CHECK(rel(cyl_jy(1.5, x).y, y32) < 1e-11);
    }
    CHECK(std::abs(cyl_jy(0.5, kPi / 2).y) < 1e-11); // cos(pi/2) = 0
}

TEST_CASE("Y against the quadrature oracle at (1, 2)")
{
    const double want = oracle::bessel_y_quadrature(1.0, 2.0);
    CHECK(rel(cyl_jy(1.0, 2.0).y, want) < 1e-9);
    // the oracle itself reproduces the 40-digit value
    CHECK(rel(want, -0.1070324315409375469) < 1e-12);
}

TEST_CASE("Wronskian J Y' - J' Y = 2/(pi x)")
{
    SUBCASE("spec point (0.3, 0.01)")
    {
        const auto v = cyl_jy(0.3, 0.01);
        CHECK(rel(v.j * v.yp - v.jp * v.y, 2.0 / (kPi * 0.01)) < 1e-9);
    }
    SUBCASE("200-point grid spanning nu in [0,150], x in [1e-4,100]")
    {
        // For each x, orders go up to the largest nu whose Y stays inside
        // double range (the excluded corners are unrepresentable, not
        // inaccurate).
        int checked = 0;
        for (int ix = 0; ix < 20; ++ix) {
            const double x = 1e-4 * std::pow(1e6, ix / 19.0);
            double nu_max = 150.0;
            while (nu_max > 0.0 && specfun::log_y_magnitude(nu_max, x) > 600.0)
                nu_max -= 1.0;
            for (int in = 0; in < 10; ++in) {
                const double nu = nu_max * in / 9.0;
                CAPTURE(nu);
                CAPTURE(x);
                const auto v = cyl_jy(nu, x);
                if (v.j == 0.0)
                    continue; // J underflowed at this corner
                CHECK(rel(v.j * v.yp - v.jp * v.y, 2.0 / (kPi * x)) < 1e-9);
                ++checked;
            }
        }
        CHECK(checked >= 195);
    }
}

TEST_CASE("three-term recurrence with independently computed orders")
{
    for (double nu : {1.2, 1.5, 3.3, 17.6, 60.2}) {
        for (double x : {0.05, 0.9, 2.7, 14.0, 88.0}) {
            const double jm = cyl_jy(nu - 0.5, x).j; // avoid sharing reduction paths
            (void)jm;
            const auto a = cyl_jy(nu - 1.0, x);
            const auto b = cyl_jy(nu, x);
            const auto c = cyl_jy(nu + 1.0, x);
            if (b.j == 0.0 || a.j == 0.0)
                continue;
            const double lhs = a.j + c.j;
            const double rhs = 2.0 * nu / x * b.j;
            CHECK(std::abs(lhs - rhs) <=
                  1e-9 * std::max({std::abs(a.j), std::abs(c.j), std::abs(rhs)}));
        }
    }
}

TEST_CASE("hankel1 composition and guards")
{
    SUBCASE("half order: H_{1/2}(pi/2) = 2/pi + 0i")
    {
        const auto [h, hp] = specfun::hankel1(0.5, kPi / 2);
        CHECK(rel(h.real(), 2.0 / kPi) < 1e-11);
        CHECK(std::abs(h.imag()) < 1e-11);
    }
    SUBCASE("modulus identity |H|^2 = J^2 + Y^2 at (0.2, 4.3e-3)")
    {
        const auto v = cyl_jy(0.2, 4.3e-3);
        const auto [h, hp] = specfun::hankel1(0.2, 4.3e-3);
        CHECK(rel(std::norm(h), v.j * v.j + v.y * v.y) < 1e-12);
    }
    SUBCASE("large-argument asymptotic series at (3.7, 50)")
    {
        const auto [h, hp] = specfun::hankel1(3.7, 50.0);
        const auto want = oracle::hankel1_asymptotic(3.7, 50.0);
        CHECK(std::abs(h - want) / std::abs(want) < 1e-3);
    }
}

TEST_CASE("near-integer orders go through the stabilized path")
{
    // mu within 1e-3 of an integer: reflection would cancel; values still
    // have to match the reference rows (covered above).  Here: continuity
    // across the branch switch.
    for (double x : {0.03, 0.8, 1.9}) {
        const double below = cyl_jy(2.0 - 9e-4, x).y;
        const double at = cyl_jy(2.0 - 1.1e-3, x).y;
        CHECK(rel(below, at) < 2e-3); // smooth in nu; branch seam is benign
    }
}

TEST_CASE("working-range errors")
{
    CHECK_THROWS_AS(cyl_jy(-0.1, 1.0), RangeError);
    CHECK_THROWS_AS(cyl_jy(200.5, 1.0), RangeError);
    CHECK_THROWS_AS(cyl_jy(1.0, 0.9e-8), RangeError);
    CHECK_THROWS_AS(cyl_jy(1.0, 1.1e4), RangeError);
    CHECK_THROWS_AS(cyl_jy(std::nan(""), 1.0), InputError);
    CHECK_THROWS_AS(cyl_jy(1.0, std::numeric_limits<double>::infinity()), InputError);
    // representable-range overflow inside the rectangle
    CHECK_THROWS_AS(cyl_jy(180.0, 1e-4), RangeError);
    CHECK_THROWS_AS(cyl_jy(150.0, 0.5), RangeError); // Y_150(0.5) over range
    // deep underflow of J is returned as zero, not an error; the J-only
    // entry point stays usable where Y has already left double range
    CHECK(specfun::bessel_j(150.0, 0.5).first == 0.0);
    CHECK(specfun::bessel_j(150.0, 0.5).second == 0.0);
}
