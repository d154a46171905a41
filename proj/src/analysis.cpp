#include "ab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ab/errors.hpp"
#include "ab/finite.hpp"
#include "ab/force.hpp"
#include "ab/ideal.hpp"
#include "ab/parallel.hpp"

namespace ab::analysis {
namespace {

constexpr double kScanStep = 1e-3;
constexpr double kRefineTol = 1e-8;
constexpr double kAmbiguityWindow = 1e-6;

double wrap_unit(double x)
{
    const double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

// Squared slope misfit at trial kappa.
double misfit(const CylinderScenario& sc, double kappa,
              std::span<const std::pair<double, double>> samples)
{
    const ideal::BoundarySum bs(sc, kappa);
    double r = 0.0;
    for (const auto& [phi, s] : samples) {
        const double d = bs.slope(phi) - s;
        r += d * d;
    }
    return r;
}

// Golden-section minimum of f over [a, b] to absolute tolerance tol.
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

double evaluate_observable(const CylinderScenario& sc, const Observable& obs)
{
    if (const auto* s = std::get_if<SlopeObservable>(&obs))
        return finite::FiniteSolution(sc).slope(s->phi);
    return force::force_finite(sc).f1;
}

double reference_observable(const CylinderScenario& sc, const Observable& obs)
{
    if (const auto* s = std::get_if<SlopeObservable>(&obs))
        return ideal::slope(sc, sc.alpha(), s->phi);
    return force::force_ideal(sc, sc.alpha()).f1;
}

} // namespace

KappaEstimate infer_kappa(const CylinderScenario& sc,
                          std::span<const std::pair<double, double>> slope_samples)
{
    sc.validate();
    if (slope_samples.empty())
        throw InputError("infer_kappa: no slope samples");
    for (const auto& [phi, s] : slope_samples)
        if (!std::isfinite(phi) || !std::isfinite(s) || s < 0.0)
            throw InputError("infer_kappa: samples must be finite with slope >= 0");

    // Dense scan over the kappa circle.  The mirror twin minimum sits at
    // 1-kappa, well separated from kappa at this step except near the
    // self-dual point 0.5.
    const int n = static_cast<int>(std::lround(1.0 / kScanStep));
    std::vector<double> res(static_cast<std::size_t>(n));
    parallel_for(res.size(), [&](std::size_t i) {
        res[i] = misfit(sc, static_cast<double>(i) * kScanStep, slope_samples);
    });

    // Local minima with circular neighbors.
    std::vector<int> minima;
    for (int i = 0; i < n; ++i) {
        const double prev = res[static_cast<std::size_t>((i + n - 1) % n)];
        const double next = res[static_cast<std::size_t>((i + 1) % n)];
        const double cur = res[static_cast<std::size_t>(i)];
        if (cur <= prev && cur <= next)
            minima.push_back(i);
    }
    if (minima.empty())
        throw InternalError("infer_kappa: scan produced no minimum");

    // Refine each basin (wrap-aware), then merge refined positions that
    // landed on the same point of the circle.
    struct Candidate {
        double kappa;
        double residual;
    };
    std::vector<Candidate> cands;
    for (int i : minima) {
        const double center = static_cast<double>(i) * kScanStep;
        auto f = [&](double kap) { return misfit(sc, wrap_unit(kap), slope_samples); };
        const auto [kap, r] = golden_min(f, center - kScanStep, center + kScanStep, kRefineTol);
        cands.push_back({wrap_unit(kap), r});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.residual < b.residual; });
    std::vector<Candidate> merged;
    for (const auto& c : cands) {
        bool dup = false;
        for (const auto& m : merged) {
            double d = std::abs(c.kappa - m.kappa);
            d = std::min(d, 1.0 - d); // circle distance
            if (d < 3.0 * kScanStep)
                dup = true;
        }
        if (!dup)
            merged.push_back(c);
    }

    if (merged.size() >= 2 && merged[1].residual - merged[0].residual <= kAmbiguityWindow)
        throw AmbiguityError("infer_kappa: two local minima are indistinguishable "
                             "(mirror-degenerate sample set?)");

    KappaEstimate est;
    est.kappa_hat = merged[0].kappa;
    est.residual = merged[0].residual;
    est.angles_used.reserve(slope_samples.size());
    for (const auto& [phi, s] : slope_samples)
        est.angles_used.push_back(phi);
    return est;
}

ConvergenceReport convergence_study(const CylinderScenario& base,
                                    std::span<const double> V0_ladder,
                                    const Observable& observable)
{
    base.validate();
    if (V0_ladder.size() < 4)
        throw InputError("convergence_study: ladder needs >= 4 barrier heights");
    for (std::size_t i = 1; i < V0_ladder.size(); ++i)
        if (!(V0_ladder[i] > V0_ladder[i - 1]))
            throw InputError("convergence_study: ladder must be strictly increasing");
    if (!(V0_ladder.back() / V0_ladder.front() >= 1e3))
        throw InputError("convergence_study: ladder must span >= 3 decades");

    ConvergenceReport rep;
    rep.ladder.resize(V0_ladder.size());
    std::vector<double> vals(V0_ladder.size());
    parallel_for(V0_ladder.size(), [&](std::size_t i) {
        CylinderScenario sc = base;
        sc.barrier = V0_ladder[i];
        vals[i] = evaluate_observable(sc, observable);
    });
    for (std::size_t i = 0; i < V0_ladder.size(); ++i)
        rep.ladder[i] = {V0_ladder[i], vals[i]};

    CylinderScenario ideal_sc = base;
    ideal_sc.barrier = std::numeric_limits<double>::infinity();
    rep.reference = reference_observable(ideal_sc, observable);

    // Richardson-style limit from the last three points: solve
    // (o1-o2)/(o2-o3) = (V1^-p - V2^-p)/(V2^-p - V3^-p) for p, then read
    // off the limit.
    const std::size_t m = V0_ladder.size();
    const double o1 = vals[m - 3], o2 = vals[m - 2], o3 = vals[m - 1];
    const double V1 = V0_ladder[m - 3], V2 = V0_ladder[m - 2], V3 = V0_ladder[m - 1];
    const double d12 = o1 - o2, d23 = o2 - o3;
    if (d23 == 0.0 || d12 / d23 <= 1.0)
        throw FitError("convergence_study: tail is not a decreasing power law");
    const double target = d12 / d23;
    auto ratio_at = [&](double p) {
        const double r1 = std::pow(V1, -p), r2 = std::pow(V2, -p), r3 = std::pow(V3, -p);
        return (r1 - r2) / (r2 - r3);
    };
    double lo = 1e-3, hi = 8.0;
    if ((ratio_at(lo) - target) * (ratio_at(hi) - target) > 0.0)
        throw FitError("convergence_study: extrapolation order outside (0.001, 8)");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((ratio_at(mid) - target) * (ratio_at(lo) - target) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double p3 = 0.5 * (lo + hi);
    const double r2 = std::pow(V2, -p3), r3 = std::pow(V3, -p3);
    const double c3 = (o2 - o3) / (r2 - r3);
    rep.extrapolated_limit = o3 - c3 * r3;

    // Least-squares order from the whole ladder against the extrapolated
    // limit: ln|o - L| = a - p ln V.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::abs(vals[i] - rep.extrapolated_limit);
        if (d <= 0.0)
            continue;
        const double x = std::log(V0_ladder[i]);
        const double y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 3)
        throw FitError("convergence_study: too few usable ladder points for the order fit");
    const double denom = used * sxx - sx * sx;
    const double slope_fit = (used * sxy - sx * sy) / denom;
    const double intercept = (sy - slope_fit * sx) / used;
    rep.fitted_order = -slope_fit;

    // Reject the fit when the power law misses by more than 10% of the
    // observable range.
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    const double range = *mx - *mn;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::abs(vals[i] - rep.extrapolated_limit);
        const double fit = std::exp(intercept + slope_fit * std::log(V0_ladder[i]));
        if (std::abs(d - fit) > 0.1 * std::max(range, 1e-300))
            throw FitError("convergence_study: power-law fit residual exceeds 10% of range");
    }
    return rep;
}

PeriodicityReport flux_periodicity_check(const CylinderScenario& sc, double alpha,
                                         std::span<const int> offsets, double phi)
{
    sc.validate();
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw InputError("flux_periodicity_check: alpha must lie in [0, 1)");
    if (offsets.empty())
        throw InputError("flux_periodicity_check: no offsets");
    if (!(sc.barrier >= 1e8 * sc.wavenumber * sc.wavenumber))
        throw InputError("flux_periodicity_check: requires V0 >= 1e8 k^2");

    PeriodicityReport rep;
    rep.offsets.assign(offsets.begin(), offsets.end());
    rep.betas.resize(offsets.size());
    rep.slopes.resize(offsets.size());
    parallel_for(offsets.size(), [&](std::size_t i) {
        if (offsets[i] < 0 && alpha + offsets[i] < 0.0)
            throw InputError("flux_periodicity_check: offset drives beta negative");
        CylinderScenario s = sc;
        s.flux_ratio = alpha + offsets[i];
        rep.betas[i] = s.flux_ratio;
        rep.slopes[i] = finite::FiniteSolution(s).slope(phi);
    });
    for (std::size_t i = 0; i < rep.slopes.size(); ++i)
        for (std::size_t j = i + 1; j < rep.slopes.size(); ++j)
            rep.max_defect = std::max(rep.max_defect, std::abs(rep.slopes[i] - rep.slopes[j]));
    return rep;
}

} // namespace ab::analysis
