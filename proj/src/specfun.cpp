#include "ab/specfun.hpp"

#include <cmath>
#include <limits>

#include "ab/errors.hpp"

namespace ab::specfun {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr double kOverflowLogLimit = 700.0; // e^700 < DBL_MAX < e^710
constexpr int kMaxIter = 200000;

constexpr double kNuMax = 200.0;
constexpr double kXMin = 1e-8;
constexpr double kXMax = 1e4;

// Regime boundary between the power-series/reflection path and Steed's
// continued fractions.  Below 2 the power series is cancellation-free for
// any order (the first Bessel zero sits at 2.40), above 2 CF2 converges.
constexpr double kSeriesXMax = 2.0;

// Near-integer guard for the Y reflection formula: below this the sin(pi mu)
// cancellation costs more than three digits and we switch to the limiting
// (Temme) series.
constexpr double kReflectionMuMin = 1e-3;

struct SeriesJ {
    double j;
    double jp;
};

// Ascending series of J_a(x) and its x-derivative, summed until the term
// falls below eps * |sum|.  Valid for any real a with a + 1 not at a pole
// of Gamma handled by the caller; cancellation-free for x <= 2.
// first_term = (x/2)^a / Gamma(a+1) supplied by the caller so the two
// normalizations (lgamma for a >= 0, tgamma for the small negative orders
// of the reflection seeds) share one loop.
SeriesJ j_series_from(double a, double x, double first_term)
{
    const double mx2 = -0.25 * x * x;
    double t = first_term;
    double sum = t;
    double dsum = t * a;
    for (int m = 1; m < 400; ++m) {
        t *= mx2 / (m * (a + m));
        sum += t;
        dsum += t * (a + 2 * m);
        if (std::abs(t) < kEps * std::abs(sum) && m > 2)
            return {sum, dsum / x};
    }
    throw InternalError("bessel J series did not converge");
}

// J_nu for nu >= 0 via lgamma (overflow/underflow safe).
SeriesJ j_series(double nu, double x)
{
    const double l0 = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
    if (l0 < -kOverflowLogLimit)
        return {0.0, 0.0}; // below double range; see header contract
    return j_series_from(nu, x, std::exp(l0));
}

// J_a for the reflection seeds, a in (-1.6, 1.6).  tgamma handles the
// negative-argument poles' neighbourhood with the correct sign.
SeriesJ j_series_small_order(double a, double x)
{
    const double g = std::tgamma(a + 1.0);
    return j_series_from(a, x, std::pow(0.5 * x, a) / g);
}

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 the symmetric mean,
// gampl = 1/Gamma(1+mu), gammi = 1/Gamma(1-mu); |mu| <= 0.5.
void gamma_pair(double mu, double& gam1, double& gam2, double& gampl, double& gammi)
{
    gampl = 1.0 / std::tgamma(1.0 + mu);
    gammi = 1.0 / std::tgamma(1.0 - mu);
    gam2 = 0.5 * (gammi + gampl);
    if (std::abs(mu) < 1e-3) {
        // Taylor form; direct difference loses ~ eps/mu here.
        constexpr double c0 = 0.57721566490153286061; // Euler gamma
        constexpr double c2 = -0.04200263503409523553;
        gam1 = -(c0 + c2 * mu * mu);
    } else {
        gam1 = (gammi - gampl) / (2.0 * mu);
    }
}

struct SeedY {
    double y_mu;
    double y_mu1; // Y_{mu+1}
};

// Temme's series for Y_mu(x), Y_{mu+1}(x), |mu| <= 1/2, x <= 2.  This is
// the stabilized limiting form of the reflection formula used when nu is
// within 1e-3 of an integer.
SeedY temme_y(double mu, double x)
{
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    gamma_pair(mu, gam1, gam2, gampl, gammi);
    double ff = 2.0 / kPi * fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    e = std::exp(e);
    double p = e / (gampl * kPi);
    double q = 1.0 / (e * kPi * gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = std::abs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fact3 * fact3;
    double c = 1.0;
    d = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    for (int i = 1; i < 30000; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * (ff + r * q);
        sum += del;
        const double del1 = c * p - i * del;
        sum1 += del1;
        if (std::abs(del) < (1.0 + std::abs(sum)) * kEps)
            return {-sum, -sum1 * 2.0 / x};
    }
    throw InternalError("Temme Y series did not converge");
}

// Reflection seeds Y_mu, Y_{mu+1} for 1e-3 <= |mu| <= 1/2:
//   Y_mu     = (J_mu cos(mu pi) - J_{-mu}) / sin(mu pi)
//   Y_{mu+1} = (J_{mu+1} cos(mu pi) + J_{-mu-1}) / sin(mu pi)
SeedY reflection_y(double mu, double x)
{
    const double c = std::cos(kPi * mu);
    const double s = std::sin(kPi * mu);
    const double jmu = j_series_small_order(mu, x).j;
    const double jmmu = j_series_small_order(-mu, x).j;
    const double jmu1 = j_series_small_order(mu + 1.0, x).j;
    const double jmmu1 = j_series_small_order(-mu - 1.0, x).j;
    return {(jmu * c - jmmu) / s, (jmu1 * c + jmmu1) / s};
}

// Small-argument path (x < 2): J from its power series, Y from reflection
// or Temme seeds at reduced order mu = nu - round(nu), then the (stable)
// forward recurrence up to nu.
CylinderValue small_x(double nu, double x)
{
    const SeriesJ jj = j_series(nu, x);

    const int m = static_cast<int>(std::lround(nu));
    const double mu = nu - m;
    const SeedY seed = std::abs(mu) < kReflectionMuMin ? temme_y(mu, x) : reflection_y(mu, x);

    double y, yp;
    if (m == 0) {
        y = seed.y_mu;
        yp = (mu / x) * seed.y_mu - seed.y_mu1;
    } else {
        double ym1 = seed.y_mu;  // Y_{mu+j-1}
        double yv = seed.y_mu1;  // Y_{mu+j}
        for (int j = 1; j < m; ++j) {
            const double next = 2.0 * (mu + j) / x * yv - ym1;
            if (std::abs(next) > 1e305)
                throw RangeError("Y_nu overflows double range at this (nu, x)");
            ym1 = yv;
            yv = next;
        }
        y = yv;
        yp = ym1 - (nu / x) * yv;
    }
    return {nu, x, jj.j, y, jj.jp, yp};
}

// Steed's method for x >= 2 (CF1 + backward recurrence for J, CF2 at the
// reduced order, forward recurrence for Y).  The continued fractions and
// recurrences run in long double: at x ~ 1e4 CF1 takes ~1e4 Lentz steps
// and double-precision rounding there costs a few 1e-10 relative.
// With need_y false the Y recurrence (the only overflow-prone stage) is
// skipped and y/yp come back as NaN.
CylinderValue steed(double nu_in, double x_in, bool need_y)
{
    using LD = long double;
    const LD nu = nu_in;
    const LD x = x_in;
    const LD eps = std::numeric_limits<LD>::epsilon();
    const LD fpmin = std::numeric_limits<LD>::min() / eps;
    const LD pi = 3.14159265358979323846264338327950288L;

    const LD xi = 1.0L / x;
    const LD xi2 = 2.0L * xi;
    const LD w = xi2 / pi; // Wronskian

    // CF1: h = J'_nu / J_nu by modified Lentz; isign tracks sign flips of
    // the denominators, giving the sign of J_nu.
    int isign = 1;
    LD h = nu * xi;
    if (h < fpmin)
        h = fpmin;
    LD b = xi2 * nu;
    LD d = 0.0L;
    LD c = h;
    int i = 0;
    for (; i < kMaxIter; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin)
            d = fpmin;
        c = b - 1.0L / c;
        if (std::abs(c) < fpmin)
            c = fpmin;
        d = 1.0L / d;
        const LD del = c * d;
        h *= del;
        if (d < 0.0L)
            isign = -isign;
        if (std::abs(del - 1.0L) <= eps)
            break;
    }
    if (i >= kMaxIter)
        throw InternalError("CF1 did not converge");

    // Backward recurrence from nu down to mu = nu - nl with mu near x,
    // where CF2 converges.
    const int nl = std::max(0, static_cast<int>(nu_in - x_in + 1.5));
    const LD mu = nu - nl;
    const LD mu2 = mu * mu;

    LD rjl = isign * fpmin;
    LD rjpl = h * rjl;
    const LD rjl1 = rjl;  // unnormalized J_nu
    const LD rjp1 = rjpl; // unnormalized J'_nu
    LD fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const LD rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0L)
        rjl = eps;
    const LD f = rjpl / rjl; // J'_mu / J_mu

    // CF2: p + i q = (J'_mu + i Y'_mu) / (J_mu + i Y_mu).
    LD a = 0.25L - mu2;
    LD p = -0.5L * xi;
    LD q = 1.0L;
    LD br = 2.0L * x;
    LD bi = 2.0L;
    fact = a * xi / (p * p + q * q);
    LD cr = br + q * fact;
    LD ci = bi + p * fact;
    LD den = br * br + bi * bi;
    LD dr = br / den;
    LD di = -bi / den;
    LD dlr = cr * dr - ci * di;
    LD dli = cr * di + ci * dr;
    LD temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (i = 1; i < kMaxIter; ++i) {
        a += 2 * i;
        bi += 2.0L;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < fpmin)
            dr = fpmin;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::abs(cr) + std::abs(ci) < fpmin)
            cr = fpmin;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0L) + std::abs(dli) <= eps)
            break;
    }
    if (i >= kMaxIter)
        throw InternalError("CF2 did not converge");

    const LD gam = (p - f) / q;
    LD rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);

    // Normalize the backward-recurred J values.
    fact = rjmu / rjl;
    const double j = static_cast<double>(rjl1 * fact);
    const double jp = static_cast<double>(rjp1 * fact);

    if (!need_y)
        return {nu_in, x_in, j, std::numeric_limits<double>::quiet_NaN(), jp,
                std::numeric_limits<double>::quiet_NaN()};

    LD rymu = rjmu * gam;
    const LD rymup = rymu * (p + q / gam);
    LD ry1 = mu * xi * rymu - rymup;

    // Forward recurrence for Y up to nu.
    for (int l = 1; l <= nl; ++l) {
        const LD rytemp = (mu + l) * xi2 * ry1 - rymu;
        if (std::abs(rytemp) > 1e305L)
            throw RangeError("Y_nu overflows double range at this (nu, x)");
        rymu = ry1;
        ry1 = rytemp;
    }
    const double y = static_cast<double>(rymu);
    const double yp = static_cast<double>(nu * xi * rymu - ry1);
    return {nu_in, x_in, j, y, jp, yp};
}

} // namespace

double log_y_magnitude(double nu, double x)
{
    if (nu <= x || nu < 1.0)
        return 0.0; // O(1) oscillatory regime
    // Uniform large-order estimate: |Y_nu(x)| ~ exp(nu (alpha - tanh alpha)),
    // cosh(alpha) = nu / x.
    const double ratio = nu / x;
    const double alpha = std::acosh(ratio);
    return nu * (alpha - std::tanh(alpha));
}

bool y_overflows(double nu, double x)
{
    return log_y_magnitude(nu, x) > kOverflowLogLimit - 10.0;
}

namespace {
void check_working_range(double nu, double x)
{
    if (!std::isfinite(nu) || !std::isfinite(x))
        throw InputError("bessel: non-finite order or argument");
    if (nu < 0.0 || nu > kNuMax)
        throw RangeError("bessel: order outside working range [0, 200]");
    if (x < kXMin || x > kXMax)
        throw RangeError("bessel: argument outside working range [1e-8, 1e4]");
}
} // namespace

CylinderValue cyl_jy(double nu, double x)
{
    check_working_range(nu, x);
    CylinderValue v = x < kSeriesXMax ? small_x(nu, x) : steed(nu, x, true);
    if (!std::isfinite(v.y) || !std::isfinite(v.yp))
        throw RangeError("Y_nu overflows double range at this (nu, x)");
    return v;
}

std::pair<double, double> bessel_j(double nu, double x)
{
    // J alone never overflows (deep underflow comes back as 0), so this
    // path skips the Y stages and their range checks.
    check_working_range(nu, x);
    if (x < kSeriesXMax) {
        const SeriesJ s = j_series(nu, x);
        return {s.j, s.jp};
    }
    const CylinderValue v = steed(nu, x, false);
    return {v.j, v.jp};
}

std::pair<double, double> bessel_y(double nu, double x)
{
    const CylinderValue v = cyl_jy(nu, x);
    return {v.y, v.yp};
}

std::pair<std::complex<double>, std::complex<double>> hankel1(double nu, double x)
{
    const CylinderValue v = cyl_jy(nu, x);
    const std::complex<double> h{v.j, v.y};
    if (std::abs(h) < std::numeric_limits<double>::min())
        throw InternalError("hankel1: |H| vanished on the real axis");
    return {h, {v.jp, v.yp}};
}

} // namespace ab::specfun
