#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "flrd/critical_speeds.hpp"
#include "flrd/errors.hpp"
#include "flrd/jump_matching.hpp"
#include "flrd/pde.hpp"
#include "flrd/phase_plane.hpp"
#include "flrd/profile.hpp"
#include "flrd/reaction.hpp"

namespace flrd {

using json = nlohmann::json;

namespace detail {

inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw config_error("write failed: " + path);
}

}  // namespace detail

// FNV-1a 64-bit hash of a file's bytes, as a fixed-width hex string.
inline std::string fnv1a64_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for hashing: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 15];
    while (f) {
        f.read(buf, sizeof(buf));
        const std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

inline void write_orbit_csv(const std::string& path, const orbit& orb) {
    std::string s = "u,r\n";
    for (const auto& p : orb.samples)
        s += detail::num17(p.u) + "," + detail::num17(p.r) + "\n";
    detail::write_text(path, s);
}

inline json orbit_sidecar(const orbit& orb) {
    json j;
    j["sigma"] = orb.sigma;
    j["class"] = to_string(orb.cls);
    j["u_plus"] = detail::num_or_null(orb.u_plus);
    j["u_minus"] = detail::num_or_null(orb.u_minus);
    j["r_limit"] = detail::num_or_null(orb.r_limit);
    j["grazing"] = orb.grazing;
    j["launch_offset"] = orb.launch_offset;
    j["n_steps"] = orb.n_steps;
    return j;
}

// Profile CSV: `xi,u`, a jump encoded as two consecutive rows sharing xi=0.
// The half-line wave gets an explicit (0,0) row closing the jump to the
// vanishing state.
inline void write_profile_csv(const std::string& path, const wave_profile& w) {
    std::string s = "xi,u\n";
    for (const auto& p : w.left) s += detail::num17(p.xi) + "," + detail::num17(p.u) + "\n";
    if (w.kind == wave_kind::half_line) {
        s += "0,0\n";
    } else {
        for (std::size_t i = 0; i < w.right.size(); ++i) {
            if (i == 0 && std::abs(w.u_plus - w.u_minus) < 1e-14) continue;  // corner: no jump
            s += detail::num17(w.right[i].xi) + "," + detail::num17(w.right[i].u) + "\n";
        }
    }
    detail::write_text(path, s);
}

inline json profile_sidecar(const wave_profile& w) {
    json j;
    j["sigma"] = w.sigma;
    j["kind"] = to_string(w.kind);
    j["u_plus"] = detail::num_or_null(w.u_plus);
    j["u_minus"] = detail::num_or_null(w.u_minus);
    j["sigma_ent"] = detail::num_or_null(w.sigma_ent);
    j["sigma_smooth"] = detail::num_or_null(w.sigma_smooth);
    j["normalization"] = w.normalization;
    return j;
}

inline json crit_json(const critical_speeds& cs) {
    json j;
    j["sigma_ent"] = detail::num_or_null(cs.sigma_ent);
    j["sigma_smooth"] = detail::num_or_null(cs.sigma_smooth);
    j["tol"] = cs.tol;
    j["tol_ent"] = cs.tol_ent;
    j["n_probes"] = cs.n_probes;
    j["smooth_bracket"] = {cs.smooth_lo, cs.smooth_hi};
    j["ent_bracket"] = {cs.ent_lo, cs.ent_hi};
    json audit = json::array();
    for (const auto& a : cs.audit) {
        json e;
        e["stage"] = a.stage;
        e["sigma"] = a.sigma;
        e["class"] = to_string(a.cls);
        e["u_plus"] = detail::num_or_null(a.u_plus);
        audit.push_back(e);
    }
    j["audit"] = audit;
    return j;
}

inline json jump_report_json(const jump_report& r) {
    json j;
    j["admissible"] = r.admissible;
    j["rh_speed"] = detail::num_or_null(r.rh_speed);
    j["residual"] = detail::num_or_null(r.residual);
    j["reasons"] = r.reasons;
    return j;
}

inline void write_snapshot_csv(const std::string& path, const grid1d& g,
                               const std::vector<double>& u) {
    std::string s = "x,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        s += detail::num17(cell_center(g, i)) + "," + detail::num17(u[i]) + "\n";
    detail::write_text(path, s);
}

inline void write_front_csv(const std::string& path, const front_trace& ft) {
    std::string s = "t,x_front,speed_est\n";
    for (std::size_t i = 0; i < ft.times.size(); ++i) {
        s += detail::num17(ft.times[i]) + ",";
        s += std::isfinite(ft.positions[i]) ? detail::num17(ft.positions[i]) : std::string("nan");
        s += ",";
        s += std::isfinite(ft.speeds[i]) ? detail::num17(ft.speeds[i]) : std::string("nan");
        s += "\n";
    }
    detail::write_text(path, s);
}

inline json params_json(const model_params& mp) {
    json j;
    for (const auto& [k, v] : to_kv(mp)) j[k] = v;
    return j;
}

inline model_params params_from_json(const json& j) {
    std::map<std::string, std::string> kv;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_string())
            kv[it.key()] = it->get<std::string>();
        else
            kv[it.key()] = it->dump();
    }
    return model_params_from_kv(kv);
}

// Run manifest: every produced file with its hash; written last so its
// presence marks a completed run.
struct run_manifest {
    std::string command;
    model_params params;
    json options;
    std::vector<std::string> outputs;
    std::string tool_version;
    std::string format_version = "1";
};

inline void write_manifest(const std::string& path, const run_manifest& m) {
    json j;
    j["command"] = m.command;
    j["params"] = params_json(m.params);
    j["options"] = m.options.is_null() ? json::object() : m.options;
    json outs = json::array();
    for (const auto& p : m.outputs) {
        json e;
        e["path"] = p;
        e["fnv1a64"] = fnv1a64_file(p);
        outs.push_back(e);
    }
    j["outputs"] = outs;
    j["versions"] = {{"tool", m.tool_version}, {"format", m.format_version}};
    detail::write_text(path, j.dump(2) + "\n");
}

struct manifest_check_result {
    bool ok = true;
    std::vector<std::string> problems;
};

inline manifest_check_result check_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open manifest: " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw config_error("manifest parse error: " + std::string(e.what()));
    }
    manifest_check_result res;
    if (!j.contains("outputs") || !j["outputs"].is_array()) {
        res.ok = false;
        res.problems.push_back("manifest has no outputs array");
        return res;
    }
    for (const auto& e : j["outputs"]) {
        const std::string p = e.value("path", "");
        const std::string want = e.value("fnv1a64", "");
        std::ifstream probe(p, std::ios::binary);
        if (!probe) {
            res.ok = false;
            res.problems.push_back("missing output: " + p);
            continue;
        }
        probe.close();
        const std::string got = fnv1a64_file(p);
        if (got != want) {
            res.ok = false;
            res.problems.push_back("hash mismatch: " + p + " (expected " + want + ", got " +
                                   got + ")");
        }
    }
    return res;
}

}  // namespace flrd
