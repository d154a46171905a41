#pragma once

// Test-only oracles, independent of the library's evaluation paths:
//  - ascending J series with compensated (Neumaier) summation,
//  - Romberg quadrature of the standard Y integral representation,
//  - the large-argument Hankel expansion with correction terms,
//  - modified-Bessel log-derivative for the zero-flux interior channel.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Neumaier compensated accumulator.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// Defining power series of J_nu with compensated summation; the stated
// ground truth for the small-argument regime.
inline double bessel_j_series(double nu, double x, int terms = 60)
{
    const double t0 = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    KahanSum sum;
    double t = t0;
    sum.add(t);
    for (int m = 1; m < terms; ++m) {
        t *= -0.25 * x * x / (m * (nu + m));
        sum.add(t);
    }
    return sum.value();
}

inline double bessel_j_series_derivative(double nu, double x, int terms = 60)
{
    const double t0 = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    KahanSum sum;
    double t = t0;
    sum.add(t * nu);
    for (int m = 1; m < terms; ++m) {
        t *= -0.25 * x * x / (m * (nu + m));
        sum.add(t * (nu + 2 * m));
    }
    return sum.value() / x;
}

namespace detail {
// Romberg on [a, b]; f must be smooth.  Refines the trapezoid rule until
// the extrapolated value moves by less than tol.
template <class F>
double romberg(F&& f, double a, double b, double tol)
{
    constexpr int kMaxRows = 22;
    std::vector<double> row(kMaxRows), prev(kMaxRows);
    double h = b - a;
    prev[0] = 0.5 * h * (f(a) + f(b));
    long n = 1;
    for (int i = 1; i < kMaxRows; ++i) {
        KahanSum mid;
        for (long j = 0; j < n; ++j)
            mid.add(f(a + (j + 0.5) * h));
        row[0] = 0.5 * (prev[0] + h * mid.value());
        double pow4 = 1.0;
        for (int k = 1; k <= i; ++k) {
            pow4 *= 4.0;
            row[k] = row[k - 1] + (row[k - 1] - prev[k - 1]) / (pow4 - 1.0);
        }
        if (i > 3 && std::abs(row[i] - prev[i - 1]) < tol * (1.0 + std::abs(row[i])))
            return row[i];
        std::swap(row, prev);
        n *= 2;
        h *= 0.5;
    }
    throw std::runtime_error("romberg: no convergence");
}
} // namespace detail

// Y_nu(x) = (1/pi) Int_0^pi sin(x sin t - nu t) dt
//         - (1/pi) Int_0^inf (e^{nu t} + e^{-nu t} cos(nu pi)) e^{-x sinh t} dt
inline double bessel_y_quadrature(double nu, double x, double tol = 1e-13)
{
    const double osc = detail::romberg(
        [&](double t) { return std::sin(x * std::sin(t) - nu * t); }, 0.0, kPi, tol);
    // upper cut where the integrand is below 1e-20
    double T = 1.0;
    while (nu * T - x * std::sinh(T) > -50.0)
        T += 0.5;
    const double tail = detail::romberg(
        [&](double t) {
            return (std::exp(nu * t) + std::exp(-nu * t) * std::cos(nu * kPi)) *
                   std::exp(-x * std::sinh(t));
        },
        0.0, T, tol);
    return (osc - tail) / kPi;
}

// H^(1)_nu(x) ~ sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} sum_k i^k a_k / x^k,
// a_k = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k).  Five terms reach
// ~1e-6 relative at x = 50, nu ~ 4.
inline std::complex<double> hankel1_asymptotic(double nu, double x, int terms = 5)
{
    const double mu = 4.0 * nu * nu;
    std::complex<double> series = 1.0;
    double ak = 1.0;
    std::complex<double> ipow = 1.0;
    for (int k = 1; k < terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        ak *= (mu - odd * odd) / (k * 8.0);
        ipow *= std::complex<double>{0.0, 1.0};
        series += ipow * ak / std::pow(x, k);
    }
    const double phase = x - 0.5 * kPi * nu - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * std::polar(1.0, phase) * series;
}

// I_nu via its (all-positive) ascending series; fine for x up to ~30.
inline double bessel_i_series(double nu, double x)
{
    double t = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    KahanSum sum;
    sum.add(t);
    for (int m = 1; m < 400; ++m) {
        t *= 0.25 * x * x / (m * (nu + m));
        sum.add(t);
        if (t < 1e-18 * sum.value())
            break;
    }
    return sum.value();
}

// Zero-flux interior log-derivative: f = I_|n|(q r), q = sqrt(2 V0 - k^2),
// so L = q I'_n(q R)/I_n(q R) with I'_n = (I_{n-1} + I_{n+1})/2.
inline double logderiv_modified_bessel(int n, double q, double R)
{
    const double a = std::abs(static_cast<double>(n));
    const double iv = bessel_i_series(a, q * R);
    const double ivm = bessel_i_series(std::abs(a - 1.0), q * R);
    const double ivp = bessel_i_series(a + 1.0, q * R);
    return q * 0.5 * (ivm + ivp) / iv;
}

} // namespace oracle
