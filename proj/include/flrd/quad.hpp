#pragma once

#include <array>
#include <cmath>
#include <string>

#include "flrd/errors.hpp"

namespace flrd {

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]
inline constexpr std::array<double, 8> gk15_nodes = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285,
};

inline constexpr std::array<double, 8> gk15_wk = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892042,
    0.0229353220105292249637320080589695,
};

// Gauss-7 weights aligned with odd Kronrod nodes (indices 0, 2, 4, 6 above)
inline constexpr std::array<double, 4> gk15_wg = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820,
};

template <class F>
struct gk_panel {
    double integral;
    double error;

    template <class G>
    static gk_panel evaluate(G&& f, double a, double b) {
        const double h = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        const double f0 = f(mid);
        double res_k = gk15_wk[0] * f0;
        double res_g = gk15_wg[0] * f0;
        for (int j = 1; j < 8; ++j) {
            const double dx = h * gk15_nodes[j];
            const double fs = f(mid - dx) + f(mid + dx);
            res_k += gk15_wk[j] * fs;
            if (j % 2 == 0) res_g += gk15_wg[j / 2] * fs;
        }
        res_k *= h;
        res_g *= h;
        // |K15 - G7| is a conservative error estimate for the K15 value
        return {res_k, std::abs(res_k - res_g)};
    }
};

}  // namespace detail

struct quad_result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

// Adaptive Gauss-Kronrod 7-15 with bisection.
// Accepts a panel when its error estimate is under the locally apportioned tolerance.
template <class F>
quad_result integrate(F&& f, double a, double b, double rtol = 1e-12, double atol = 1e-15,
                      int max_depth = 48) {
    if (a == b) return {0.0, 0.0, 0};
    quad_result out;
    struct frame {
        double a, b;
        int depth;
    };
    // explicit stack: worst case 2*max_depth frames alive
    std::array<frame, 128> stack;
    int top = 0;
    stack[top++] = {a, b, 0};
    double scale_hint = 0.0;
    while (top > 0) {
        const frame fr = stack[--top];
        const auto p = detail::gk_panel<F>::evaluate(f, fr.a, fr.b);
        if (!std::isfinite(p.integral))
            throw quadrature_failure("integrate: non-finite panel on [" + std::to_string(fr.a) +
                                     ", " + std::to_string(fr.b) + "]");
        scale_hint = std::max(scale_hint, std::abs(p.integral));
        const double frac = std::abs(fr.b - fr.a) / std::abs(b - a);
        const double tol = std::max(atol * frac, rtol * scale_hint * frac);
        if (p.error <= tol || fr.depth >= max_depth) {
            if (fr.depth >= max_depth && p.error > 64.0 * tol)
                throw quadrature_failure("integrate: panel error " + std::to_string(p.error) +
                                         " above tolerance at maximum refinement depth");
            out.value += p.integral;
            out.error += p.error;
            ++out.panels;
        } else {
            if (top + 2 > static_cast<int>(stack.size()))
                throw quadrature_failure("integrate: refinement stack overflow");
            const double m = 0.5 * (fr.a + fr.b);
            stack[top++] = {fr.a, m, fr.depth + 1};
            stack[top++] = {m, fr.b, fr.depth + 1};
        }
    }
    return out;
}

}  // namespace flrd
