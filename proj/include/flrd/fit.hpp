#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "flrd/errors.hpp"

namespace flrd {

struct line_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;  // root-mean-square of vertical residuals
    std::size_t n = 0;
};

// Ordinary least squares y ~ slope*x + intercept, centered for conditioning.
inline line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw fit_unstable("fit_line: need >= 2 matched points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw fit_unstable("fit_line: degenerate abscissae (zero spread)");
    line_fit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.n = n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.slope * x[i] + out.intercept);
        ss += r * r;
    }
    out.residual_rms = std::sqrt(ss / static_cast<double>(n));
    if (!std::isfinite(out.slope) || !std::isfinite(out.intercept))
        throw fit_unstable("fit_line: non-finite fit coefficients");
    return out;
}

}  // namespace flrd
