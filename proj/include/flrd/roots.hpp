#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "flrd/errors.hpp"

namespace flrd {

struct root_result {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

// Brent's method on a sign-changing bracket [a, b].
// Converges to |b - a| <= xtol + rtol*|x| or |f| <= ftol, whichever first.
template <class F>
root_result brent(F&& f, double a, double b, double xtol = 1e-14, double rtol = 4e-16,
                  double ftol = 0.0, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw non_finite("brent: non-finite function value at bracket end");
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw invalid_bracket("brent: no sign change on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 1; it <= max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 0.5 * (xtol + rtol * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= ftol) return {b, fb, it};

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw non_finite("brent: non-finite function value at x=" + std::to_string(b));
    }
    throw non_convergence("brent: no convergence in " + std::to_string(max_iter) + " iterations");
}

}  // namespace flrd
