#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "flrd/errors.hpp"

namespace flrd {

template <std::size_t N>
using vec = std::array<double, N>;

// one accepted step, with derivatives at both ends for dense evaluation
template <std::size_t N>
struct ode_step {
    double t0 = 0.0, t1 = 0.0;
    vec<N> y0{}, y1{}, f0{}, f1{};
};

// cubic Hermite evaluation inside an accepted step; O(h^4) accurate
template <std::size_t N>
vec<N> hermite(const ode_step<N>& s, double t) {
    const double h = s.t1 - s.t0;
    const double th = (t - s.t0) / h;
    const double t2 = th * th, t3 = t2 * th;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + th;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    vec<N> y;
    for (std::size_t i = 0; i < N; ++i)
        y[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] + h * h11 * s.f1[i];
    return y;
}

struct ode_options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0: choose automatically
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
};

enum class ode_flow { run, stop };

template <std::size_t N>
struct ode_result {
    double t = 0.0;
    vec<N> y{};
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
    bool stopped_by_observer = false;
};

namespace detail {

// Dormand-Prince 5(4) tableau
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a2[1] = {1.0 / 5};
inline constexpr double dp_a3[2] = {3.0 / 40, 9.0 / 40};
inline constexpr double dp_a4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
inline constexpr double dp_a5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                    -212.0 / 729};
inline constexpr double dp_a6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
inline constexpr double dp_b[6] = {35.0 / 384,    0.0,        500.0 / 1113,
                                   125.0 / 192,   -2187.0 / 6784, 11.0 / 84};
inline constexpr double dp_e[7] = {71.0 / 57600, 0.0,           -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

}  // namespace detail

// Adaptive explicit Runge-Kutta of order 5(4) with FSAL and a PI step controller.
// The observer sees every accepted step and may stop the run or cap the next step;
// it is called as observer(const ode_step<N>&, double& h_next) -> ode_flow.
template <std::size_t N, class F, class Obs>
ode_result<N> integrate_adaptive(F&& f, double t0, vec<N> y0, double t_end,
                                 const ode_options& opt, Obs&& observer) {
    using namespace detail;
    ode_result<N> res;
    res.t = t0;
    res.y = y0;
    if (t_end == t0) return res;
    const double dir = (t_end > t0) ? 1.0 : -1.0;

    vec<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    f(t0, y0, k1);

    auto err_norm = [&](const vec<N>& y, const vec<N>& yn, const vec<N>& e) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
            const double q = e[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / static_cast<double>(N));
    };

    double h = opt.h_init;
    if (h == 0.0) {
        // Hairer-style starting step from the scale of y and y'
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(t_end - t0));
        // one explicit Euler probe to estimate the second derivative scale
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y0[i] + dir * h0 * k1[i];
        f(t0 + dir * h0, ytmp, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y0[i]);
            const double q = (k2[i] - k1[i]) / sc;
            d2 += q * q;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dmax = std::max(d1, d2);
        double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dmax, 1.0 / 5.0);
        h = std::min({100.0 * h0, h1, std::abs(t_end - t0), opt.h_max});
    }
    h = std::min(std::abs(h), opt.h_max);

    double t = t0;
    vec<N> y = y0;
    double err_old = 1e-4;
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon();

    while (dir * (t_end - t) > 0.0) {
        if (res.n_steps + res.n_rejected >= opt.max_steps)
            throw non_convergence("integrate_adaptive: step budget exhausted at t=" +
                                  std::to_string(t));
        if (h < h_floor * std::max(1.0, std::abs(t)))
            throw non_convergence("integrate_adaptive: step size underflow at t=" +
                                  std::to_string(t));
        bool last = false;
        if (std::abs(h) >= dir * (t_end - t)) {
            h = t_end - t;  // signed for either direction
            last = true;
        } else {
            h = dir * h;
        }

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * dp_a2[0] * k1[i];
        f(t + dp_c[1] * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (dp_a3[0] * k1[i] + dp_a3[1] * k2[i]);
        f(t + dp_c[2] * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (dp_a4[0] * k1[i] + dp_a4[1] * k2[i] + dp_a4[2] * k3[i]);
        f(t + dp_c[3] * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (dp_a5[0] * k1[i] + dp_a5[1] * k2[i] + dp_a5[2] * k3[i] +
                                  dp_a5[3] * k4[i]);
        f(t + dp_c[4] * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (dp_a6[0] * k1[i] + dp_a6[1] * k2[i] + dp_a6[2] * k3[i] +
                                  dp_a6[3] * k4[i] + dp_a6[4] * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (dp_b[0] * k1[i] + dp_b[2] * k3[i] + dp_b[3] * k4[i] +
                                  dp_b[4] * k5[i] + dp_b[5] * k6[i]);
        f(t + h, ynew, k7);  // FSAL

        vec<N> errv;
        for (std::size_t i = 0; i < N; ++i)
            errv[i] = h * (dp_e[0] * k1[i] + dp_e[2] * k3[i] + dp_e[3] * k4[i] +
                           dp_e[4] * k5[i] + dp_e[5] * k6[i] + dp_e[6] * k7[i]);
        double err = err_norm(y, ynew, errv);
        if (!std::isfinite(err)) err = 10.0;  // force rejection and step shrink

        if (err <= 1.0) {
            ode_step<N> srec;
            srec.t0 = t;
            srec.t1 = t + h;
            srec.y0 = y;
            srec.y1 = ynew;
            srec.f0 = k1;
            srec.f1 = k7;

            t += h;
            y = ynew;
            k1 = k7;
            ++res.n_steps;

            // PI controller (Hairer): beta stabilizes near-stiff stretches
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
            err_old = std::max(err, 1e-10);
            double h_next = std::abs(h) * std::clamp(fac, 0.2, 5.0);
            h_next = std::min(h_next, opt.h_max);

            if (observer(srec, h_next) == ode_flow::stop) {
                res.t = t;
                res.y = y;
                res.stopped_by_observer = true;
                return res;
            }
            h = h_next;
            if (last) {  // the clamped step was accepted: snap away the rounding
                t = t_end;
                break;
            }
        } else {
            ++res.n_rejected;
            const double fac = std::max(0.9 * std::pow(err, -1.0 / 5.0), 0.2);
            h = std::abs(h) * fac;
        }
    }
    res.t = t;
    res.y = y;
    return res;
}

}  // namespace flrd
