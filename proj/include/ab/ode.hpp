#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ab/errors.hpp"

namespace ab::ode {

// Adaptive Dormand-Prince 5(4) for small fixed-dimension systems.
// Checkpoints are forced step endpoints, so sampled states carry the full
// integrator accuracy (no dense-output interpolation).

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Sample {
    double t;
    State<N> y;
};

template <std::size_t N>
struct Options {
    double rtol = 1e-10;
    double atol = 1e-14;
    double guard = 1e12;      // |y_i| beyond this -> StiffnessError (pole)
    std::size_t max_steps = 2'000'000;
};

namespace detail {
// Butcher tableau (Dormand & Prince 1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (error weights; e2 = 0)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace detail

// Integrates y' = rhs(t, y) from t0 to t1 (t0 < t1).  Calls observe(t, y)
// at t0, every checkpoint, and t1.  Checkpoints must be sorted and inside
// [t0, t1].
template <std::size_t N, class Rhs, class Observe>
void integrate(Rhs&& rhs, double t0, double t1, State<N> y, std::span<const double> checkpoints,
               const Options<N>& opt, Observe&& observe)
{
    using namespace detail;
    auto f = [&](double t, const State<N>& v) { return rhs(t, v); };

    double t = t0;
    observe(t, y);
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t0)
        ++next_cp;

    State<N> k1 = f(t, y);
    double h = (t1 - t0) * 1e-4;
    double errold = 1e-4;
    std::size_t steps = 0;

    while (t < t1) {
        if (++steps > opt.max_steps)
            throw ToleranceError("ode: step budget exhausted");
        double target = t1;
        bool at_cp = false;
        if (next_cp < checkpoints.size() && checkpoints[next_cp] < target) {
            target = checkpoints[next_cp];
            at_cp = true;
        }
        bool clipped = false;
        if (t + h >= target) {
            h = target - t;
            clipped = true;
        }

        State<N> k2, k3, k4, k5, k6, yt, y5;
        auto axpy = [&](const auto&... terms) {
            State<N> out;
            for (std::size_t i = 0; i < N; ++i)
                out[i] = y[i] + h * (... + (terms.first * terms.second[i]));
            return out;
        };
        using P = std::pair<double, const State<N>&>;
        yt = axpy(P{a21, k1});
        k2 = f(t + c2 * h, yt);
        yt = axpy(P{a31, k1}, P{a32, k2});
        k3 = f(t + c3 * h, yt);
        yt = axpy(P{a41, k1}, P{a42, k2}, P{a43, k3});
        k4 = f(t + c4 * h, yt);
        yt = axpy(P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
        k5 = f(t + c5 * h, yt);
        yt = axpy(P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
        k6 = f(t + h, yt);
        y5 = axpy(P{b1, k1}, P{b3, k3}, P{b4, k4}, P{b5, k5}, P{b6, k6});
        const State<N> k7 = f(t + h, y5);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            for (std::size_t i = 0; i < N; ++i)
                if (std::abs(y[i]) > opt.guard)
                    throw StiffnessError("ode: state exceeded pole guard");
            if (at_cp && t >= target) {
                observe(t, y);
                ++next_cp;
            } else if (t >= t1) {
                observe(t, y);
            }
            // PI step control
            const double scale = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                                 std::pow(errold, 0.4 / 5.0);
            double hnew = h * std::clamp(scale, 0.2, 5.0);
            errold = std::max(err, 1e-4);
            h = clipped ? std::max(hnew, (t1 - t0) * 1e-12) : hnew;
        } else {
            h *= std::max(0.9 * std::pow(err, -0.2), 0.1);
            if (!(h > (t1 - t0) * 1e-15))
                throw ToleranceError("ode: step size underflow");
        }
    }
}

template <std::size_t N, class Rhs>
State<N> integrate_to(Rhs&& rhs, double t0, double t1, State<N> y0, const Options<N>& opt = {})
{
    State<N> out{};
    integrate<N>(std::forward<Rhs>(rhs), t0, t1, y0, {}, opt,
                 [&](double, const State<N>& y) { out = y; });
    return out;
}

} // namespace ab::ode
