#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "flrd/errors.hpp"

namespace flrd {

// Monotonicity-preserving piecewise-cubic Hermite interpolant
// (Fritsch-Carlson slope limiting). Never overshoots the data.
class pchip {
public:
    pchip() = default;

    pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw config_error("pchip: need >= 2 nodes and matching value count");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i] < x_[i + 1]))
                throw config_error("pchip: abscissae must be strictly increasing (node " +
                                   std::to_string(i) + ")");
        d_.resize(n);
        if (n == 2) {
            d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            return;
        }
        std::vector<double> h(n - 1), del(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            del[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        // interior slopes: weighted harmonic mean when deltas share a sign, else 0
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] * del[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        d_[0] = end_slope(h[0], h[1], del[0], del[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    }

    double operator()(double x) const { return eval(x); }

    // Evaluates with clamped extrapolation: outside the node range the end value is returned.
    double eval(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        const double h10 = t3 - 2.0 * t2 + t;
        const double h01 = -2.0 * t3 + 3.0 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

    double derivative(double x) const {
        std::size_t i;
        if (x <= x_.front())
            i = 0;
        else if (x >= x_.back())
            i = x_.size() - 2;
        else
            i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = std::clamp((x - x_[i]) / h, 0.0, 1.0);
        const double t2 = t * t;
        const double g00 = (6.0 * t2 - 6.0 * t) / h;
        const double g10 = 3.0 * t2 - 4.0 * t + 1.0;
        const double g01 = (-6.0 * t2 + 6.0 * t) / h;
        const double g11 = 3.0 * t2 - 2.0 * t;
        return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    static double end_slope(double h0, double h1, double del0, double del1) {
        // one-sided three-point estimate, limited to preserve shape
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0)
            d = 0.0;
        else if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0))
            d = 3.0 * del0;
        return d;
    }

    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        if (i == 0) return 0;
        if (i >= x_.size()) return x_.size() - 2;
        return i - 1;
    }

    std::vector<double> x_, y_, d_;
};

}  // namespace flrd
