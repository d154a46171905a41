#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ab/scenario.hpp"

namespace ab::analysis {

// V0-ladder convergence record for one observable.
struct ConvergenceReport {
    std::vector<std::pair<double, double>> ladder; // (V0, observable), V0 increasing
    double extrapolated_limit = 0.0;
    double fitted_order = 0.0; // power p of the V0^{-p} tail
    double reference = 0.0;    // ideal-model value at kappa = frac(beta)
};

// Result of the two-angle kappa inversion.
struct KappaEstimate {
    double kappa_hat = 0.0; // in [0, 1)
    double residual = 0.0;  // sum of squared slope misfits at the minimum
    std::vector<double> angles_used;
};

// Observable selector for convergence studies: the boundary slope at a
// fixed angle, or the normalized backward force component f1.
struct SlopeObservable {
    double phi;
};
struct ForceObservable {};
using Observable = std::variant<SlopeObservable, ForceObservable>;

// Least-squares inversion of ideal_slope for kappa given (phi, slope)
// samples: dense scan at step 1e-3 over the kappa circle, then
// golden-section refinement to 1e-8.  AmbiguityError when two distinct
// minima have residuals within 1e-6 (e.g. a single sample at phi = pi,
// where kappa and 1-kappa coincide).
KappaEstimate infer_kappa(const CylinderScenario& sc,
                          std::span<const std::pair<double, double>> slope_samples);

// Computes the observable along the V0 ladder (>= 4 values spanning >= 3
// decades), fits observable(V0) = limit + c V0^{-p}, and reports the
// extrapolated limit, fitted order, and the ideal reference.
ConvergenceReport convergence_study(const CylinderScenario& base,
                                    std::span<const double> V0_ladder,
                                    const Observable& observable);

// Limiting slopes for beta = alpha + m over the integer offsets at the
// scenario's (large) V0.
struct PeriodicityReport {
    std::vector<int> offsets;
    std::vector<double> betas;
    std::vector<double> slopes;
    double max_defect = 0.0; // max pairwise |slope_i - slope_j|
};

PeriodicityReport flux_periodicity_check(const CylinderScenario& sc, double alpha,
                                         std::span<const int> offsets, double phi);

} // namespace ab::analysis
