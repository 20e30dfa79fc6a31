#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "flrd/errors.hpp"
#include "flrd/phase_plane.hpp"
#include "flrd/reaction.hpp"

namespace flrd {

// Two speeds organize the wave family:
//   sigma_smooth: supremum of speeds whose orbit steepens to a vertical
//                 tangent. Above it waves are smooth; at it the wave has a
//                 continuous corner; below it the profile needs a jump.
//   sigma_ent:    the smallest speed whose jump lands at a nonnegative state;
//                 below it no admissible (entropy-satisfying) wave exists.
// Both are found by bisection on orbit classification / jump solvability,
// with every probe recorded for audit.

struct audit_entry {
    std::string stage;  // "smooth" or "ent"
    double sigma = 0.0;
    orbit_class cls = orbit_class::type1;
    double u_plus = std::numeric_limits<double>::quiet_NaN();
};

struct critical_speeds {
    double sigma_smooth = std::numeric_limits<double>::quiet_NaN();
    double sigma_ent = std::numeric_limits<double>::quiet_NaN();
    double tol = 0.0;
    double tol_ent = 0.0;
    int n_probes = 0;
    // certified brackets: the property named is known to hold at each end
    double smooth_lo = 0.0, smooth_hi = 0.0;  // classify(lo)=type2, classify(hi)=type1
    double ent_lo = 0.0, ent_hi = 0.0;        // jump lands below 0 at lo, above 0 at hi
    std::vector<audit_entry> audit;
};

struct crit_options {
    double tol = 1e-6;       // bisection width for sigma_smooth
    double tol_ent = 1e-8;   // bisection width for sigma_ent
    phase_options phase{};
};

namespace detail {

inline orbit classify_probe(const model_params& mp, double sigma, const crit_options& co,
                            critical_speeds& out, const char* stage) {
    phase_options po = co.phase;
    po.classify_only = true;
    orbit orb = launch_and_integrate(mp, sigma, po);
    out.audit.push_back({stage, sigma, orb.cls, orb.u_plus});
    ++out.n_probes;
    return orb;
}

}  // namespace detail

// Bisection on orbit class over [0, m*c]; the class is monotone in sigma.
inline critical_speeds find_sigma_smooth(const model_params& mp, const crit_options& co = {}) {
    validate(mp);
    if (!(co.tol > 0.0)) throw config_error("find_sigma_smooth: tol must be > 0");
    critical_speeds out;
    out.tol = co.tol;

    double lo = 0.0;
    double hi = mp.m * mp.c;
    if (detail::classify_probe(mp, lo, co, out, "smooth").cls != orbit_class::type2)
        throw invalid_bracket("find_sigma_smooth: orbit at sigma=0 does not steepen; "
                              "no classification change to bracket");
    if (detail::classify_probe(mp, hi, co, out, "smooth").cls != orbit_class::type1)
        throw invalid_bracket("find_sigma_smooth: orbit at sigma=m*c is not smooth");

    while (hi - lo > co.tol) {
        const double mid = 0.5 * (lo + hi);
        if (detail::classify_probe(mp, mid, co, out, "smooth").cls == orbit_class::type2)
            lo = mid;
        else
            hi = mid;
    }
    out.smooth_lo = lo;
    out.smooth_hi = hi;
    out.sigma_smooth = 0.5 * (lo + hi);
    return out;
}

// Bisection on the sign of g(sigma) = sigma/c - u_plus(sigma)^(m-1).
// g < 0 means the jump from u_plus would land below 0 (no admissible wave);
// the root is the entropic threshold, where the jump lands exactly at 0.
inline critical_speeds find_sigma_ent(const model_params& mp, const crit_options& co = {}) {
    critical_speeds out = find_sigma_smooth(mp, co);
    if (!(co.tol_ent > 0.0)) throw config_error("find_sigma_ent: tol_ent must be > 0");
    out.tol_ent = co.tol_ent;

    auto g = [&](double sigma) {
        orbit orb = detail::classify_probe(mp, sigma, co, out, "ent");
        if (orb.cls != orbit_class::type2)
            throw invalid_bracket("find_sigma_ent: probe at sigma=" + std::to_string(sigma) +
                                  " did not steepen; bracket lies outside the jump regime");
        return sigma / mp.c - std::pow(orb.u_plus, mp.m - 1.0);
    };

    double lo = out.sigma_smooth / mp.m;  // theory: sigma_ent exceeds this
    double hi = out.smooth_lo;            // certified type2, g > 0 here
    const double g_lo = g(lo);
    if (!(g_lo < 0.0))
        throw invalid_bracket("find_sigma_ent: no sign change on [sigma_smooth/m, sigma_smooth]");
    const double g_hi = g(hi);
    if (!(g_hi > 0.0))
        throw invalid_bracket("find_sigma_ent: jump already inadmissible at the smooth "
                              "bracket end");

    while (hi - lo > co.tol_ent) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    out.ent_lo = lo;
    out.ent_hi = hi;
    out.sigma_ent = 0.5 * (lo + hi);
    return out;
}

inline critical_speeds find_critical_speeds(const model_params& mp, const crit_options& co = {}) {
    return find_sigma_ent(mp, co);
}

}  // namespace flrd
