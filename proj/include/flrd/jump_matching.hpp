#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "flrd/errors.hpp"
#include "flrd/phase_plane.hpp"
#include "flrd/reaction.hpp"

namespace flrd {

// Jump algebra for the saturated regime, where the flux of a steep front
// caps at c*u^m and a discontinuity moving at speed v must satisfy the
// Rankine-Hugoniot relation v = c (uL^m - uR^m)/(uL - uR).

// psi(u_plus, x) = ((u_plus)^m - x^m)/(u_plus - x), continuously extended by
// m*(u_plus)^(m-1) at x = u_plus. Strictly increasing in x on [0, u_plus] with
// range [(u_plus)^(m-1), m*(u_plus)^(m-1)].
inline double psi(double m, double u_plus, double x) {
    if (!(m > 1.0)) throw config_error("psi: m must be > 1");
    if (!(u_plus > 0.0)) throw domain_error("psi: u_plus must be > 0");
    if (!(x >= 0.0)) throw domain_error("psi: x must be >= 0");
    const double mid = 0.5 * (u_plus + x);
    const double d = u_plus - x;
    if (std::abs(d) <= 1e-6 * mid) {
        // difference quotient cancels near coincidence; midpoint expansion
        // psi = m*mid^(m-1) * (1 + (m-1)(m-2)/24 * (d/mid)^2 + O(d^4))
        const double t = d / mid;
        return m * std::pow(mid, m - 1.0) * (1.0 + (m - 1.0) * (m - 2.0) / 24.0 * t * t);
    }
    return (std::pow(u_plus, m) - std::pow(x, m)) / d;
}

// the unique x in [0, u_plus] with psi(u_plus, x) = sigma/c
inline double solve_u_minus(const model_params& mp, double sigma, double u_plus) {
    if (!(u_plus > 0.0)) throw domain_error("solve_u_minus: u_plus must be > 0");
    const double target = sigma / mp.c;
    const double lo_val = std::pow(u_plus, mp.m - 1.0);
    const double hi_val = mp.m * lo_val;
    const double slack = 1e-12 * std::max(1.0, hi_val);
    if (target < lo_val - slack)
        throw no_admissible_jump("solve_u_minus: sigma/c=" + std::to_string(target) +
                                 " below psi(u_plus,0)=" + std::to_string(lo_val) +
                                 "; the jump would land below 0 (speed below the entropic "
                                 "threshold)");
    if (target > hi_val + slack)
        throw no_admissible_jump("solve_u_minus: sigma/c=" + std::to_string(target) +
                                 " above psi(u_plus,u_plus)=" + std::to_string(hi_val) +
                                 "; no jump is needed at this speed");
    if (target <= lo_val) return 0.0;
    if (target >= hi_val) return u_plus;

    // bisection to a tight bracket, then Newton polish on the closed-form slope
    double a = 0.0, b = u_plus;
    double fa = lo_val - target;
    for (int it = 0; it < 80 && (b - a) > 1e-10 * u_plus; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = psi(mp.m, u_plus, mid) - target;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        const double f = psi(mp.m, u_plus, x) - target;
        double dpsi;
        const double d = u_plus - x;
        if (std::abs(d) <= 1e-6 * u_plus) {
            dpsi = 0.5 * mp.m * (mp.m - 1.0) * std::pow(0.5 * (u_plus + x), mp.m - 2.0);
        } else {
            dpsi = (psi(mp.m, u_plus, x) - mp.m * std::pow(x, mp.m - 1.0)) / d;
        }
        if (!(dpsi > 0.0)) break;
        const double xn = x - f / dpsi;
        if (xn <= a || xn >= b) break;  // keep the certified bracket
        x = xn;
    }
    return std::min(std::max(x, 0.0), u_plus);
}

// Rankine-Hugoniot speed of a jump between u_left and u_right; symmetric.
inline double rh_speed(const model_params& mp, double u_left, double u_right) {
    if (std::abs(u_left - u_right) < 1e-14)
        throw degenerate_jump("rh_speed: |u_left - u_right| < 1e-14");
    const double a = std::max(u_left, u_right);
    const double b = std::min(u_left, u_right);
    return mp.c * psi(mp.m, a, b);
}

// an admissible jump pair at speed sigma
struct jump_pair {
    double sigma = 0.0;
    double u_plus = 0.0;
    double u_minus = 0.0;
    double rh_residual = 0.0;  // |psi(u_plus, u_minus) - sigma/c|
};

inline jump_pair make_jump_pair(const model_params& mp, double sigma, double u_plus) {
    jump_pair jp;
    jp.sigma = sigma;
    jp.u_plus = u_plus;
    jp.u_minus = solve_u_minus(mp, sigma, u_plus);
    jp.rh_residual = std::abs(psi(mp.m, u_plus, jp.u_minus) - sigma / mp.c);
    return jp;
}

// One-sided profile slopes are classified symbolically: the admissibility rule
// asks for "vertical with the same sign", not for any finite magnitude.
enum class one_sided_slope { finite, minus_inf, plus_inf };

inline const char* to_string(one_sided_slope s) {
    switch (s) {
        case one_sided_slope::finite: return "finite";
        case one_sided_slope::minus_inf: return "-inf";
        default: return "+inf";
    }
}

struct jump_report {
    bool admissible = false;
    double rh_speed = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> reasons;  // empty when admissible
};

// Verdict on a candidate discontinuity: the RH speed must match sigma and the
// profile must be vertical (slope -inf) on both sides, except that the right
// slope is unconstrained when the jump lands at 0. Never throws.
inline jump_report check_entropy_jump(const model_params& mp, double sigma, double u_left,
                                      double u_right, one_sided_slope slope_left,
                                      one_sided_slope slope_right, double tol = 1e-8) {
    jump_report rep;
    if (!(u_left > u_right)) rep.reasons.push_back("not_decreasing: u_left <= u_right");
    if (u_right < 0.0) rep.reasons.push_back("right_state_negative");
    if (std::abs(u_left - u_right) < 1e-14) {
        rep.reasons.push_back("degenerate_amplitude: |u_left - u_right| < 1e-14");
        return rep;
    }
    if (u_left > 0.0 && u_right >= 0.0 && u_left > u_right) {
        rep.rh_speed = rh_speed(mp, u_left, u_right);
        rep.residual = std::abs(rep.rh_speed - sigma);
        if (rep.residual > tol)
            rep.reasons.push_back("rh_mismatch: |v - sigma| = " + std::to_string(rep.residual));
    } else {
        rep.reasons.push_back("states_outside_range");
    }
    if (slope_left != one_sided_slope::minus_inf)
        rep.reasons.push_back("left_slope_not_vertical");
    if (u_right != 0.0 && slope_right != one_sided_slope::minus_inf)
        rep.reasons.push_back("right_slope_not_vertical");
    rep.admissible = rep.reasons.empty();
    return rep;
}

}  // namespace flrd
