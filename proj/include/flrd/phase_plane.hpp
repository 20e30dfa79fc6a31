#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "flrd/errors.hpp"
#include "flrd/ode.hpp"
#include "flrd/reaction.hpp"
#include "flrd/roots.hpp"

namespace flrd {

// Orbits of the first-order profile equation in the inclination chart
//   r = -(nu/c) u' / sqrt(u^2 + (nu/c)^2 u'^2)  in [0, 1],
// integrated in decreasing u. r = 1 means a vertical profile tangent.
//
//   type1: r stays below 1 and tends to a positive limit as u -> 0
//          (smooth monotone front reaching 0 tangentially)
//   type2: r reaches 1 at some u_plus > 0 (profile steepens to a vertical
//          tangent; below u_plus the wave continues across a jump)
//   type3: branch launched downward from a vertical tangent at u_minus
//          (the continuation below an admissible jump)
enum class orbit_class { type1, type2, type3 };

inline const char* to_string(orbit_class c) {
    switch (c) {
        case orbit_class::type1: return "type1";
        case orbit_class::type2: return "type2";
        default: return "type3";
    }
}

struct orbit_sample {
    double u = 0.0;
    double r = 0.0;
    double s = 0.0;  // sqrt(1 - r^2), stored to avoid cancellation near r = 1
};

struct orbit {
    double sigma = 0.0;
    orbit_class cls = orbit_class::type1;
    std::vector<orbit_sample> samples;  // ordered by decreasing u
    double u_plus = std::numeric_limits<double>::quiet_NaN();   // type2 only
    double u_minus = std::numeric_limits<double>::quiet_NaN();  // type3 only
    double r_limit = std::numeric_limits<double>::quiet_NaN();  // r at u_floor when reached
    double r_max = 0.0;
    bool grazing = false;          // came within graze_tol of r = 1 without crossing
    double launch_offset = 0.0;    // distance below u = 1 at launch
    std::size_t n_steps = 0;
};

struct phase_options {
    double launch_eps = 1e-6;
    double rtol = 1e-10;
    double atol = 1e-12;
    double u_floor = 1e-6;
    double graze_tol = 1e-8;
    double tail_ratio = 0.997;  // geometric u-step of the stiff-tail marcher
    bool classify_only = false;  // stop as soon as the class is certain; skip sampling
};

// Density at which the advective and degenerate-diffusion slopes balance;
// a vertical tangent can only form at u >= u_star.
inline double u_star(const model_params& mp, double sigma) {
    if (!(sigma >= 0.0)) throw domain_error("u_star: sigma must be >= 0");
    if (sigma == 0.0) return 0.0;
    return std::pow(sigma / (mp.c * mp.m), 1.0 / (mp.m - 1.0));
}

// Limiting inclination of type1 orbits as u -> 0.
inline double r_star(const model_params& mp, double sigma) {
    if (!(sigma > 0.0)) throw domain_error("r_star: sigma must be > 0");
    const double a = mp.nu * K_at_0(mp.reaction) / (mp.c * sigma);
    return a / std::sqrt(1.0 + a * a);
}

// Slope dr/du of the orbit entering the saturated state u = 1; negative.
inline double lambda_sigma(const model_params& mp, double sigma) {
    if (!(sigma >= 0.0)) throw domain_error("lambda_sigma: sigma must be >= 0");
    const double kp = K_prime_at_1(mp.reaction);  // < 0
    const double disc = sigma * sigma - 4.0 * kp * mp.nu;
    return 2.0 * mp.nu * kp / (mp.c * (sigma + std::sqrt(disc)));
}

// Right-hand side dr/du of the inclination chart. The square root is clamped
// so the field extends continuously across r = 1, where it stays regular.
inline double graph_rhs(const model_params& mp, double sigma, double u, double r) {
    if (!(u > 0.0)) throw domain_error("graph_rhs: u must be > 0");
    if (!(r > 0.0)) throw domain_error("graph_rhs: r must be > 0");
    const double um = std::pow(u, mp.m);
    const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
    return sigma / (mp.c * um) - mp.m * r / u -
           (eval_K(mp.reaction, u) / um) * (mp.nu / (mp.c * mp.c)) * s / r;
}

namespace detail {

struct branch_config {
    double u0, r0;
    bool watch_escape;     // stop and record u_plus when r crosses 1 upward
    bool early_type1;      // below u_star the crossing is impossible; class is settled
    orbit_class base_cls;
};

// Semi-implicit Euler on geometric u-steps for the degenerate tail, where the
// chart stiffens like u^{-m} and the orbit tracks its slow manifold. The
// linearization damps the error, so first order suffices here.
inline void tail_march(const model_params& mp, double sigma, double u, double r,
                       const phase_options& po, orbit& orb, double& u_last_rec) {
    const double nv = mp.nu / (mp.c * mp.c);
    while (u > po.u_floor) {
        const double un = std::max(u * po.tail_ratio, po.u_floor);
        const double h = un - u;  // negative
        const double um = std::pow(u, mp.m);
        const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
        const double A = nv * eval_K(mp.reaction, u) / um;
        const double g = sigma / (mp.c * um) - mp.m * r / u - A * s / r;
        const double J = -mp.m / u + (s > 0.0 ? A / (s * r * r) : 0.0);
        r += h * g / (1.0 - h * J);
        u = un;
        ++orb.n_steps;
        if (r <= 1e-12) {  // degenerate-at-zero reactions can exhaust the inclination
            orb.samples.push_back({u, 0.0, 1.0});
            orb.r_limit = 0.0;
            return;
        }
        if (r >= 1.0) r = std::nextafter(1.0, 0.0);
        orb.r_max = std::max(orb.r_max, r);
        if (!po.classify_only) {
            const double drec =
                std::clamp(0.05 * std::min(1.0 - u, u), 1e-9, 1e-3);
            if (u_last_rec - u >= drec || u <= po.u_floor) {
                orb.samples.push_back({u, r, std::sqrt(std::max(0.0, 1.0 - r * r))});
                u_last_rec = u;
            }
        }
    }
    orb.r_limit = r;
}

inline orbit integrate_branch(const model_params& mp, double sigma, const branch_config& bc,
                              const phase_options& po) {
    orbit orb;
    orb.sigma = sigma;
    orb.cls = bc.base_cls;
    orb.launch_offset = bc.u0 < 1.0 ? 1.0 - bc.u0 : 0.0;

    const double ustar = u_star(mp, sigma);
    const double early_u = ustar * (1.0 - 1e-12);
    const double r_lim = sigma > 0.0 ? r_star(mp, sigma) : 1.0;

    auto rhs = [&](double u, const vec<1>& y, vec<1>& dy) {
        const double r = std::max(y[0], 1e-300);
        const double um = std::pow(u, mp.m);
        const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
        dy[0] = sigma / (mp.c * um) - mp.m * r / u -
                (eval_K(mp.reaction, u) / um) * (mp.nu / (mp.c * mp.c)) * s / r;
    };

    double u_last_rec = bc.u0;
    orb.samples.push_back({bc.u0, bc.r0, std::sqrt(std::max(0.0, 1.0 - bc.r0 * bc.r0))});
    orb.r_max = bc.r0;

    bool class_settled = !bc.early_type1;
    bool switch_to_tail = false;
    double tail_u = 0.0, tail_r = 0.0;

    auto observer = [&](const ode_step<1>& s, double& h_next) -> ode_flow {
        const double ub = s.t1, rb = s.y1[0];
        ++orb.n_steps;

        if (bc.watch_escape && rb >= 1.0) {
            // vertical tangent reached inside this step; locate the crossing
            double uc;
            if (s.y0[0] >= 1.0) {
                uc = s.t0;
            } else {
                auto f = [&](double uu) { return hermite(s, uu)[0] - 1.0; };
                uc = brent(f, s.t1, s.t0, 1e-15, 4e-16).x;
            }
            orb.u_plus = uc;
            orb.cls = orbit_class::type2;
            orb.samples.push_back({uc, 1.0, 0.0});
            return ode_flow::stop;
        }

        orb.r_max = std::max(orb.r_max, rb);

        if (rb < 1e-10) {
            // inclination exhausted (possible when the source degenerates at 0);
            // the orbit flattens out and there is nothing further to resolve
            orb.r_limit = std::max(rb, 0.0);
            orb.samples.push_back({ub, std::max(rb, 0.0), 1.0});
            return ode_flow::stop;
        }

        if (!class_settled && ub < early_u) {
            // the crossing needs u >= u_star; from here the orbit is type1
            class_settled = true;
            if (po.classify_only) return ode_flow::stop;
        }

        if (!po.classify_only) {
            const bool dense = rb > 0.9;
            const double drec =
                dense ? 0.0 : std::clamp(0.05 * std::min(1.0 - ub, ub), 1e-9, 1e-3);
            if (u_last_rec - ub >= drec) {
                orb.samples.push_back({ub, rb, std::sqrt(std::max(0.0, 1.0 - rb * rb))});
                u_last_rec = ub;
            }
        }

        // step caps: resolve the approach to r = 1 (event location + sampling
        // density for the near-jump window), finer when a profile will be
        // built; h_next is signed (negative, u decreasing), cap its magnitude
        auto cap_mag = [&h_next](double cap) {
            if (std::abs(h_next) > cap) h_next = std::copysign(cap, h_next);
        };
        if (rb > 0.9) cap_mag(1e-3);
        if (rb > 0.95 && !po.classify_only) cap_mag(1e-4);
        if (rb > 0.995 && !po.classify_only) cap_mag(1e-5);

        // hand the degenerate tail to the implicit marcher once the controller
        // step collapses relative to u; rb <= 0.9 keeps this out of the
        // capped near-vertical zone, where small steps are policy, not
        // stiffness. The u->0 plateau r_star(sigma) can itself sit above 0.9
        // (slow speeds), so an orbit settled onto it hands off as well;
        // ub < 0.9 u_star keeps both clauses clear of the escape approach.
        const bool relaxed = rb <= 0.9 || std::abs(rb - r_lim) <= 0.02;
        if (class_settled && relaxed && ub < 0.9 * ustar && std::abs(h_next) < 2e-3 * ub &&
            ub > po.u_floor) {
            switch_to_tail = true;
            tail_u = ub;
            tail_r = rb;
            return ode_flow::stop;
        }
        return ode_flow::run;
    };

    ode_options oo;
    oo.rtol = po.rtol;
    oo.atol = po.atol;
    oo.max_steps = 5'000'000;
    // a sampled branch launched at the vertical tangent must not leap over
    // the near-jump window before the observer's step caps engage
    if (!po.classify_only && bc.r0 > 0.95) oo.h_init = 1e-5;
    const auto res = integrate_adaptive<1>(rhs, bc.u0, vec<1>{bc.r0}, po.u_floor, oo, observer);

    if (switch_to_tail) {
        tail_march(mp, sigma, tail_u, tail_r, po, orb, u_last_rec);
    } else if (!res.stopped_by_observer || (orb.cls != orbit_class::type2 && !po.classify_only)) {
        if (orb.cls != orbit_class::type2 && res.t <= po.u_floor * (1.0 + 1e-12)) {
            orb.r_limit = res.y[0];
            if (!po.classify_only && u_last_rec > res.t) {
                const double r = res.y[0];
                orb.samples.push_back({res.t, r, std::sqrt(std::max(0.0, 1.0 - r * r))});
            }
        }
    }

    if (orb.cls != orbit_class::type2)
        orb.grazing = (1.0 - orb.r_max) <= po.graze_tol;
    return orb;
}

}  // namespace detail

// Launches the orbit off the saturated state u = 1 along its entry direction
// and integrates down; classifies it and, unless classify_only, samples it.
inline orbit launch_and_integrate(const model_params& mp, double sigma,
                                  const phase_options& po = {}) {
    validate(mp);
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw domain_error("launch_and_integrate: sigma must be finite and >= 0");
    const double eps = po.launch_eps;
    if (!(eps > 0.0) || eps > 1e-2)
        throw config_error("launch_and_integrate: launch_eps must lie in (0, 1e-2]");
    detail::branch_config bc;
    bc.u0 = 1.0 - eps;
    bc.r0 = -lambda_sigma(mp, sigma) * eps;
    bc.watch_escape = true;
    bc.early_type1 = true;
    bc.base_cls = orbit_class::type1;
    orbit orb = detail::integrate_branch(mp, sigma, bc, po);
    orb.launch_offset = eps;
    return orb;
}

// Integrates the continuation branch that leaves a vertical tangent at
// u_minus and decays to 0; used below an admissible jump.
inline orbit integrate_type3(const model_params& mp, double sigma, double u_minus,
                             const phase_options& po = {}) {
    validate(mp);
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw domain_error("integrate_type3: sigma must be finite and > 0");
    if (!(u_minus > po.u_floor))
        throw domain_error("integrate_type3: u_minus=" + std::to_string(u_minus) +
                           " must exceed the integration floor");
    const double ustar = u_star(mp, sigma);
    if (u_minus > ustar * (1.0 + 1e-9))
        throw domain_error("integrate_type3: u_minus must not exceed u_star");
    detail::branch_config bc;
    // at the stall density the launch point is degenerate; nudge off it
    bc.u0 = (u_minus > ustar * (1.0 - 1e-9)) ? u_minus * (1.0 - 1e-9) : u_minus;
    bc.r0 = 1.0;
    bc.watch_escape = false;
    bc.early_type1 = false;
    bc.base_cls = orbit_class::type3;
    orbit orb = detail::integrate_branch(mp, sigma, bc, po);
    orb.u_minus = u_minus;
    orb.launch_offset = u_minus - bc.u0;
    return orb;
}

}  // namespace flrd
