#pragma once

#include <complex>
#include <utility>

namespace ab::specfun {

// Cylinder functions J_nu, Y_nu and x-derivatives at real order nu >= 0,
// real argument x > 0.
//
// Working range: 0 <= nu <= 200, 1e-8 <= x <= 1e4.  Outside -> RangeError.
// Values whose magnitude exceeds double range also raise RangeError; a J
// that underflows is returned as 0.
//
// Accuracy: J to ~1e-12 relative, Y to ~1e-12 relative away from zeros of
// the functions (certified at 1e-10 / 1e-9 by the test suite).
struct CylinderValue {
    double order;    // nu
    double argument; // x
    double j;        // J_nu(x)
    double y;        // Y_nu(x)
    double jp;       // dJ_nu/dx
    double yp;       // dY_nu/dx
};

// One evaluation produces the full quadruple; the pair functions below are
// thin views of it.
CylinderValue cyl_jy(double nu, double x);

std::pair<double, double> bessel_j(double nu, double x); // (J, J')
std::pair<double, double> bessel_y(double nu, double x); // (Y, Y')

// H^(1)_nu = J_nu + i Y_nu and derivative.
std::pair<std::complex<double>, std::complex<double>> hankel1(double nu, double x);

// Estimate of ln |Y_nu(x)| from the uniform large-order asymptotics; used
// to predict overflow before evaluating.  Cheap, accurate to O(1) in the
// exponent.
double log_y_magnitude(double nu, double x);

// True when cyl_jy(nu, x) would raise RangeError because Y_nu(x) exceeds
// double range.  Series code uses this to drop negligible 1/H terms.
bool y_overflows(double nu, double x);

} // namespace ab::specfun
