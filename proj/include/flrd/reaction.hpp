#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include "flrd/errors.hpp"

namespace flrd {

enum class reaction_kind { fkpp, power_law };

inline const char* to_string(reaction_kind k) {
    return k == reaction_kind::fkpp ? "fkpp" : "power_law";
}

inline reaction_kind reaction_kind_from_string(const std::string& s) {
    if (s == "fkpp") return reaction_kind::fkpp;
    if (s == "power_law") return reaction_kind::power_law;
    throw invalid_reaction("unknown reaction kind '" + s + "' (expected fkpp or power_law)");
}

// Monostable source term F with F(0)=F(1)=0 and F>0 between.
//   fkpp:      F(u) = u(1-u)
//   power_law: F(u) = u^p (1-u^q),  p,q >= 1
struct reaction_spec {
    reaction_kind kind = reaction_kind::fkpp;
    double p = 1.0;  // power_law only
    double q = 1.0;  // power_law only
};

struct model_params {
    double nu = 1.0;  // diffusion scale
    double c = 1.0;   // kinematic speed bound
    double m = 2.0;   // degeneracy exponent, m > 1
    reaction_spec reaction{};
};

inline double eval_F(const reaction_spec& r, double u) {
    constexpr double slack = 1e-12;
    if (u < 0.0) {
        if (u < -slack) throw domain_error("eval_F: u=" + std::to_string(u) + " below 0");
        u = 0.0;
    } else if (u > 1.0) {
        if (u > 1.0 + slack) throw domain_error("eval_F: u=" + std::to_string(u) + " above 1");
        u = 1.0;
    }
    if (r.kind == reaction_kind::fkpp) return u * (1.0 - u);
    return std::pow(u, r.p) * (1.0 - std::pow(u, r.q));
}

// K(u) = F(u)/u, continuously extended to u=0.
inline double eval_K(const reaction_spec& r, double u) {
    constexpr double slack = 1e-12;
    if (u < 0.0) {
        if (u < -slack) throw domain_error("eval_K: u=" + std::to_string(u) + " below 0");
        u = 0.0;
    } else if (u > 1.0) {
        if (u > 1.0 + slack) throw domain_error("eval_K: u=" + std::to_string(u) + " above 1");
        u = 1.0;
    }
    if (r.kind == reaction_kind::fkpp) return 1.0 - u;
    if (u == 0.0) return r.p == 1.0 ? 1.0 : 0.0;
    return std::pow(u, r.p - 1.0) * (1.0 - std::pow(u, r.q));
}

// K'(1), the decay rate of the source at the saturated state; negative.
inline double K_prime_at_1(const reaction_spec& r) {
    return r.kind == reaction_kind::fkpp ? -1.0 : -r.q;
}

// K(0), the low-density growth rate; zero when the source is degenerate at 0.
inline double K_at_0(const reaction_spec& r) {
    if (r.kind == reaction_kind::fkpp) return 1.0;
    return r.p == 1.0 ? 1.0 : 0.0;
}

inline void validate(const model_params& mp) {
    if (!(mp.nu > 0.0) || !std::isfinite(mp.nu))
        throw config_error("model_params: nu must be positive and finite");
    if (!(mp.c > 0.0) || !std::isfinite(mp.c))
        throw config_error("model_params: c must be positive and finite");
    if (!(mp.m > 1.0) || !std::isfinite(mp.m))
        throw config_error("model_params: m must be > 1");
    if (mp.reaction.kind == reaction_kind::power_law) {
        if (!(mp.reaction.p >= 1.0) || !std::isfinite(mp.reaction.p))
            throw invalid_reaction("power_law reaction: p must be >= 1");
        if (!(mp.reaction.q >= 1.0) || !std::isfinite(mp.reaction.q))
            throw invalid_reaction("power_law reaction: q must be >= 1");
    }
    // monostability check: F strictly positive on the open interval
    for (int i = 1; i < 1000; ++i) {
        const double u = static_cast<double>(i) / 1000.0;
        if (!(eval_F(mp.reaction, u) > 0.0))
            throw invalid_reaction("reaction is not strictly positive on (0,1) at u=" +
                                   std::to_string(u));
    }
}

namespace detail {
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
inline double parse_double(const std::map<std::string, std::string>& kv, const std::string& key,
                           double fallback, bool required) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required) throw config_error("missing required key '" + key + "'");
        return fallback;
    }
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw config_error("key '" + key + "': cannot parse '" + it->second + "' as a number");
    return v;
}
}  // namespace detail

// Flat key-value form used by configs and run manifests; round-trips exactly.
inline std::map<std::string, std::string> to_kv(const model_params& mp) {
    std::map<std::string, std::string> kv;
    kv["nu"] = detail::fmt_g17(mp.nu);
    kv["c"] = detail::fmt_g17(mp.c);
    kv["m"] = detail::fmt_g17(mp.m);
    kv["reaction.kind"] = to_string(mp.reaction.kind);
    if (mp.reaction.kind == reaction_kind::power_law) {
        kv["reaction.p"] = detail::fmt_g17(mp.reaction.p);
        kv["reaction.q"] = detail::fmt_g17(mp.reaction.q);
    }
    return kv;
}

inline model_params model_params_from_kv(const std::map<std::string, std::string>& kv) {
    model_params mp;
    mp.nu = detail::parse_double(kv, "nu", mp.nu, false);
    mp.c = detail::parse_double(kv, "c", mp.c, false);
    mp.m = detail::parse_double(kv, "m", mp.m, false);
    auto it = kv.find("reaction.kind");
    if (it != kv.end()) mp.reaction.kind = reaction_kind_from_string(it->second);
    if (mp.reaction.kind == reaction_kind::power_law) {
        mp.reaction.p = detail::parse_double(kv, "reaction.p", 1.0, true);
        mp.reaction.q = detail::parse_double(kv, "reaction.q", 1.0, true);
    }
    validate(mp);
    return mp;
}

}  // namespace flrd
