// flrd: traveling waves and entropy-respecting evolution for a flux-limited
// porous-media reaction-diffusion model.
//
// Subcommands: critical-speeds, wave, orbit, sweep, simulate, check.
// Exit codes: 0 ok, 2 config/validation, 3 domain, 4 numerical failure.
// Every run writes its outputs, then a manifest listing them with hashes;
// the manifest is written last, so its presence marks a completed run.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "flrd/critical_speeds.hpp"
#include "flrd/errors.hpp"
#include "flrd/io.hpp"
#include "flrd/jump_matching.hpp"
#include "flrd/pde.hpp"
#include "flrd/phase_plane.hpp"
#include "flrd/profile.hpp"
#include "flrd/reaction.hpp"
#include "flrd/version.hpp"

namespace fs = std::filesystem;
using flrd::json;

namespace {

struct common_opts {
    std::string config_path;
    std::string out_dir = ".";
    double tol = 1e-6;
    double tol_ent = 1e-8;
    int jobs = 1;
    bool check = false;
};

void add_common(CLI::App* cmd, common_opts& c) {
    cmd->add_option("--config", c.config_path, "JSON config file (period-decimal numbers)");
    cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--tol", c.tol, "bisection width for the smoothness threshold")
        ->capture_default_str();
    cmd->add_option("--tol-ent", c.tol_ent, "bisection width for the entropic threshold")
        ->capture_default_str();
    cmd->add_option("--jobs", c.jobs, "max concurrent workers (sweep)")->capture_default_str();
    cmd->add_flag("--check", c.check,
                  "verify the manifest in --out (outputs exist and hash-match) and exit");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw flrd::config_error("NotFound: cannot open config " + path);
    try {
        json j;
        f >> j;
        return j;
    } catch (const std::exception& e) {
        throw flrd::config_error("config parse error in " + path + ": " + e.what());
    }
}

flrd::model_params params_from_config(const json& cfg) {
    if (cfg.contains("params")) return flrd::params_from_json(cfg["params"]);
    return flrd::model_params{};
}

std::string out_file(const common_opts& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    return (fs::path(c.out_dir) / name).string();
}

void finish_manifest(const common_opts& c, const std::string& command, const flrd::model_params& mp,
                     json options, std::vector<std::string> outputs) {
    flrd::run_manifest m;
    m.command = command;
    m.params = mp;
    m.options = std::move(options);
    m.outputs = std::move(outputs);
    m.tool_version = flrd::version_string;
    flrd::write_manifest(out_file(c, "manifest.json"), m);
}

int run_check(const common_opts& c) {
    const std::string path = (fs::path(c.out_dir) / "manifest.json").string();
    flrd::manifest_check_result r = flrd::check_manifest(path);
    if (r.ok) {
        std::printf("manifest ok: %s\n", path.c_str());
        return 0;
    }
    json j;
    j["error"] = {{"code", 2}, {"type", "config"}, {"message", "manifest check failed"}};
    j["problems"] = r.problems;
    std::printf("%s\n", j.dump().c_str());
    return 2;
}

json crit_options_json(const common_opts& c) {
    return json{{"tol", c.tol}, {"tol_ent", c.tol_ent}};
}

flrd::critical_speeds find_crit(const flrd::model_params& mp, const common_opts& c) {
    flrd::crit_options co;
    co.tol = c.tol;
    co.tol_ent = c.tol_ent;
    return flrd::find_critical_speeds(mp, co);
}

// ---------------------------------------------------------------- commands

int cmd_critical_speeds(const common_opts& c) {
    if (c.check) return run_check(c);
    const json cfg = load_config(c.config_path);
    const flrd::model_params mp = params_from_config(cfg);
    const flrd::critical_speeds cs = find_crit(mp, c);

    const std::string f = out_file(c, "critical_speeds.json");
    flrd::detail::write_text(f, flrd::crit_json(cs).dump(2) + "\n");

    std::printf("sigma_ent=%.6f sigma_smooth=%.6f\n", cs.sigma_ent, cs.sigma_smooth);
    std::printf("probes=%d tol=%g tol_ent=%g brackets=[%.8f,%.8f] [%.8f,%.8f]\n", cs.n_probes,
                cs.tol, cs.tol_ent, cs.ent_lo, cs.ent_hi, cs.smooth_lo, cs.smooth_hi);

    finish_manifest(c, "critical-speeds", mp, crit_options_json(c), {f});
    return 0;
}

struct wave_opts {
    double sigma = std::numeric_limits<double>::quiet_NaN();
    std::string sigma_kind;
    bool asymptotics = false;
    bool allow_nonentropic = false;
};

// Below the entropic threshold no jump partner satisfies the jump condition;
// the demo profile closes the branch with a jump to 0 anyway and labels it
// inadmissible. Only reachable behind --allow-nonentropic.
flrd::wave_profile build_nonentropic_demo(const flrd::model_params& mp, double sigma,
                                          const flrd::critical_speeds& cs) {
    flrd::orbit orb = flrd::launch_and_integrate(mp, sigma);
    if (orb.cls != flrd::orbit_class::type2)
        throw flrd::domain_error("nonentropic demo: orbit does not steepen at sigma=" +
                                 std::to_string(sigma));
    flrd::wave_profile w;
    w.sigma = sigma;
    w.kind = flrd::wave_kind::half_line;
    w.sigma_ent = cs.sigma_ent;
    w.sigma_smooth = cs.sigma_smooth;
    w.u_plus = orb.u_plus;
    w.u_minus = 0.0;
    flrd::profile_options po;
    flrd::detail::xi_reconstructor rec(mp, orb.samples, orb.u_plus, po);
    w.left = flrd::detail::branch_points(rec);
    w.normalization = "INADMISSIBLE DEMO: jump to 0 violates the jump condition";
    return w;
}

int cmd_wave(const common_opts& c, const wave_opts& wo) {
    if (c.check) return run_check(c);
    const json cfg = load_config(c.config_path);
    const flrd::model_params mp = params_from_config(cfg);

    double sigma = wo.sigma;
    std::string kind_sel = wo.sigma_kind;
    if (cfg.contains("sigma") && std::isnan(sigma)) sigma = cfg["sigma"].get<double>();
    if (cfg.contains("sigma_kind") && kind_sel.empty())
        kind_sel = cfg["sigma_kind"].get<std::string>();
    if (std::isnan(sigma) && kind_sel.empty())
        throw flrd::config_error("wave: need --sigma or --sigma-kind (ent|smooth)");
    if (!std::isnan(sigma) && !kind_sel.empty())
        throw flrd::config_error("wave: --sigma and --sigma-kind are mutually exclusive");

    const flrd::critical_speeds cs = find_crit(mp, c);
    if (!kind_sel.empty()) {
        if (kind_sel == "ent")
            sigma = cs.sigma_ent;
        else if (kind_sel == "smooth")
            sigma = cs.sigma_smooth;
        else
            throw flrd::config_error("wave: --sigma-kind must be ent or smooth");
    }

    flrd::wave_profile w;
    bool demo = false;
    try {
        w = flrd::build_wave(mp, sigma, cs);
    } catch (const flrd::speed_below_entropic&) {
        if (!wo.allow_nonentropic) throw;
        w = build_nonentropic_demo(mp, sigma, cs);
        demo = true;
    }

    const std::string fcsv = out_file(c, "profile.csv");
    const std::string fjson = out_file(c, "profile.json");
    flrd::write_profile_csv(fcsv, w);
    json side = flrd::profile_sidecar(w);
    if (demo) {
        side["inadmissible_demo"] = true;
        side["jump_report"] = flrd::jump_report_json(flrd::check_entropy_jump(
            mp, sigma, w.u_plus, 0.0, flrd::one_sided_slope::minus_inf,
            flrd::one_sided_slope::minus_inf));
    }
    if (wo.asymptotics && w.kind != flrd::wave_kind::smooth) {
        const flrd::asymptotics as = flrd::jump_asymptotics(mp, sigma, w);
        auto side_json = [](const flrd::asym_side& s) -> json {
            if (!s.present) return nullptr;
            return json{{"exponent", s.exponent},
                        {"coeff", s.coeff},
                        {"beta_ref", flrd::detail::num_or_null(s.beta_ref)},
                        {"n_samples", s.n_samples}};
        };
        side["asymptotics"] = {{"left", side_json(as.left)}, {"right", side_json(as.right)}};
    }
    flrd::detail::write_text(fjson, side.dump(2) + "\n");

    std::printf("sigma=%.8f kind=%s u_plus=%.8f u_minus=%.8f%s\n", w.sigma,
                flrd::to_string(w.kind), w.u_plus, w.u_minus, demo ? " [INADMISSIBLE DEMO]" : "");

    json opts = crit_options_json(c);
    opts["sigma"] = w.sigma;
    opts["asymptotics"] = wo.asymptotics;
    if (demo) opts["allow_nonentropic"] = true;
    finish_manifest(c, "wave", mp, opts, {fcsv, fjson});
    return 0;
}

struct orbit_opts {
    double sigma = std::numeric_limits<double>::quiet_NaN();
};

int cmd_orbit(const common_opts& c, const orbit_opts& oo) {
    if (c.check) return run_check(c);
    const json cfg = load_config(c.config_path);
    const flrd::model_params mp = params_from_config(cfg);
    double sigma = oo.sigma;
    if (cfg.contains("sigma") && std::isnan(sigma)) sigma = cfg["sigma"].get<double>();
    if (std::isnan(sigma)) throw flrd::config_error("orbit: need --sigma");

    const flrd::orbit orb = flrd::launch_and_integrate(mp, sigma);
    const std::string fcsv = out_file(c, "orbit.csv");
    const std::string fjson = out_file(c, "orbit.json");
    flrd::write_orbit_csv(fcsv, orb);
    flrd::detail::write_text(fjson, flrd::orbit_sidecar(orb).dump(2) + "\n");

    std::printf("sigma=%.8f class=%s u_plus=%.8f r_limit=%.8f samples=%zu\n", sigma,
                flrd::to_string(orb.cls), orb.u_plus, orb.r_limit, orb.samples.size());
    finish_manifest(c, "orbit", mp, json{{"sigma", sigma}}, {fcsv, fjson});
    return 0;
}

struct sweep_opts {
    std::vector<double> sigma_list;
};

int cmd_sweep(const common_opts& c, const sweep_opts& so) {
    if (c.check) return run_check(c);
    const json cfg = load_config(c.config_path);
    const flrd::model_params mp = params_from_config(cfg);

    std::vector<double> sigmas = so.sigma_list;
    if (sigmas.empty() && cfg.contains("sigma_list"))
        sigmas = cfg["sigma_list"].get<std::vector<double>>();
    if (sigmas.empty()) throw flrd::config_error("sweep: sigma_list is empty");

    const flrd::critical_speeds cs = find_crit(mp, c);

    struct slot {
        std::optional<flrd::wave_profile> wave;
        std::string error;
    };
    std::vector<slot> slots(sigmas.size());

    const int jobs = std::max(1, std::min<int>(c.jobs, static_cast<int>(sigmas.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sigmas.size()) return;
            try {
                slots[i].wave = flrd::build_wave(mp, sigmas[i], cs);
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<std::string> outputs;
    json index = json::array();
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        char base[64];
        std::snprintf(base, sizeof(base), "profile_%03zu", i);
        json e;
        e["sigma"] = sigmas[i];
        if (slots[i].wave) {
            const std::string fcsv = out_file(c, std::string(base) + ".csv");
            const std::string fjson = out_file(c, std::string(base) + ".json");
            flrd::write_profile_csv(fcsv, *slots[i].wave);
            flrd::detail::write_text(fjson, flrd::profile_sidecar(*slots[i].wave).dump(2) + "\n");
            outputs.push_back(fcsv);
            outputs.push_back(fjson);
            e["kind"] = flrd::to_string(slots[i].wave->kind);
            e["csv"] = fcsv;
        } else {
            e["error"] = slots[i].error;
        }
        index.push_back(e);
    }

    // pairwise distances; failed entries stay NaN (printed as nan)
    const std::size_t n = sigmas.size();
    auto write_matrix = [&](const std::string& name, bool sup) {
        std::string s = "sigma";
        for (double sg : sigmas) s += "," + flrd::detail::num17(sg);
        s += "\n";
        for (std::size_t i = 0; i < n; ++i) {
            s += flrd::detail::num17(sigmas[i]);
            for (std::size_t j = 0; j < n; ++j) {
                double v = std::numeric_limits<double>::quiet_NaN();
                if (slots[i].wave && slots[j].wave) {
                    if (i == j) {
                        v = 0.0;
                    } else {
                        const flrd::distance_result d =
                            flrd::wave_distance(*slots[i].wave, *slots[j].wave, 1.0);
                        v = sup ? d.sup : d.lp;
                    }
                }
                s += ",";
                s += std::isfinite(v) ? flrd::detail::num17(v) : std::string("nan");
            }
            s += "\n";
        }
        const std::string f = out_file(c, name);
        flrd::detail::write_text(f, s);
        outputs.push_back(f);
    };
    write_matrix("distances_sup.csv", true);
    write_matrix("distances_l1.csv", false);

    const std::string fidx = out_file(c, "sweep_index.json");
    flrd::detail::write_text(fidx, index.dump(2) + "\n");
    outputs.push_back(fidx);

    std::size_t ok = 0;
    for (const auto& s : slots) ok += s.wave ? 1 : 0;
    std::printf("sweep: %zu/%zu profiles built, distance matrices written\n", ok, n);

    json opts = crit_options_json(c);
    opts["sigma_list"] = sigmas;
    opts["jobs"] = c.jobs;
    finish_manifest(c, "sweep", mp, opts, outputs);
    return 0;
}

struct simulate_opts {
    double compare_tw = std::numeric_limits<double>::quiet_NaN();
};

flrd::pde_state initial_from_config(const flrd::model_params& mp, const flrd::grid1d& g,
                                    const json& init, const common_opts& c) {
    const std::string kind = init.value("kind", "");
    if (kind == "bump")
        return flrd::make_bump(g, init.value("center", 0.0), init.value("half_width", 1.0),
                               init.value("height", 0.9));
    if (kind == "step")
        return flrd::make_step(g, init.value("x0", 0.0), init.value("width", 1.0),
                               init.value("height", 1.0));
    if (kind == "tw") {
        if (!init.contains("sigma"))
            throw flrd::config_error("simulate: initial kind tw needs sigma");
        const double sigma = init["sigma"].get<double>();
        const double x0 = init.value("x0", 0.0);
        const flrd::critical_speeds cs = find_crit(mp, c);
        const flrd::wave_profile w = flrd::build_wave(mp, sigma, cs);
        const flrd::wave_sampler sample(w);
        flrd::pde_state st;
        st.grid = g;
        st.u.resize(g.n_cells);
        for (std::size_t i = 0; i < g.n_cells; ++i)
            st.u[i] = sample(flrd::cell_center(g, i) - x0);
        return st;
    }
    throw flrd::config_error("simulate: initial.kind must be bump, step, or tw");
}

// Front-aligned discrepancy between a computed state and a TW shape over a
// trailing window behind the front (the region the wave has organized).
json compare_to_tw(const flrd::pde_state& st, const flrd::wave_profile& w) {
    const flrd::wave_sampler sample(w);
    const double level = 0.5 * w.u_plus;
    const double x_f = flrd::front_position(st, level);
    if (!std::isfinite(x_f))
        throw flrd::numerical_error("compare-tw: state never reaches half the jump level");

    // the TW's own crossing of the same level (0 if the jump spans it)
    double xi_c = 0.0;
    if (w.u_minus > level || w.kind == flrd::wave_kind::smooth ||
        w.kind == flrd::wave_kind::continuous_corner) {
        double lo = 0.0, hi = 20.0;
        if (sample(lo) > level) {
            while (sample(hi) > level && hi < 1e6) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (sample(mid) > level ? lo : hi) = mid;
            }
            xi_c = 0.5 * (lo + hi);
        }
    }

    const double dx = st.grid.dx;
    const double wlo = x_f - 0.5 - 10.0 * dx;
    const double whi = x_f - 10.0 * dx;
    double sup = 0.0, l1 = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < st.grid.n_cells; ++i) {
        const double x = flrd::cell_center(st.grid, i);
        if (x < wlo || x > whi) continue;
        const double d = std::abs(st.u[i] - sample(x - x_f + xi_c));
        sup = std::max(sup, d);
        l1 += d * dx;
        ++cnt;
    }
    if (cnt == 0) throw flrd::numerical_error("compare-tw: empty near-front window");
    return json{{"sigma", w.sigma},         {"front_position", x_f},
                {"alignment_shift", x_f - xi_c}, {"window", {wlo, whi}},
                {"sup_near_front", sup},    {"l1_near_front", l1},
                {"cells_in_window", cnt}};
}

int cmd_simulate(const common_opts& c, const simulate_opts& so) {
    if (c.check) return run_check(c);
    if (c.config_path.empty()) throw flrd::config_error("simulate: --config is required");
    const json cfg = load_config(c.config_path);
    const flrd::model_params mp = params_from_config(cfg);

    if (!cfg.contains("grid")) throw flrd::config_error("simulate: config needs grid");
    const json& jg = cfg["grid"];
    const flrd::grid1d g = flrd::make_grid(jg.value("x_min", 0.0), jg.value("x_max", 1.0),
                                           jg.value("n_cells", std::size_t{16}));

    const std::string bcs = cfg.value("bc", "dirichlet_zero");
    flrd::bc_kind bc;
    if (bcs == "dirichlet_zero")
        bc = flrd::bc_kind::dirichlet_zero;
    else if (bcs == "neumann_zero")
        bc = flrd::bc_kind::neumann_zero;
    else
        throw flrd::config_error("simulate: bc must be dirichlet_zero or neumann_zero");

    const double t_end = cfg.value("t_end", 0.0);
    if (!(t_end > 0.0)) throw flrd::config_error("simulate: t_end must be > 0");
    if (!cfg.contains("initial")) throw flrd::config_error("simulate: config needs initial");

    flrd::pde_options po;
    po.cfl = cfg.value("cfl", 0.5);
    po.front_threshold = cfg.value("front_threshold", 0.01);
    po.record_snapshots = cfg.value("record_snapshots", true);

    std::vector<double> observers;
    if (cfg.contains("observers")) observers = cfg["observers"].get<std::vector<double>>();

    const flrd::pde_state init = initial_from_config(mp, g, cfg["initial"], c);
    const flrd::run_result rr = flrd::run(mp, init, bc, t_end, observers, po);

    std::vector<std::string> outputs;
    const std::string ffront = out_file(c, "front_trace.csv");
    flrd::write_front_csv(ffront, rr.front);
    outputs.push_back(ffront);

    const std::string ffinal = out_file(c, "final_state.csv");
    flrd::write_snapshot_csv(ffinal, rr.state.grid, rr.state.u);
    outputs.push_back(ffinal);

    if (po.record_snapshots) {
        for (std::size_t k = 0; k < rr.snapshots.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", k);
            const std::string f = out_file(c, name);
            flrd::write_snapshot_csv(f, rr.state.grid, rr.snapshots[k]);
            outputs.push_back(f);
        }
    }

    json summary;
    summary["t_end"] = rr.state.t;
    summary["n_steps"] = rr.diag.n_steps;
    summary["dt_last"] = rr.diag.dt_last;
    summary["u_max_final"] = rr.diag.u_max_final;
    summary["front_final"] = flrd::detail::num_or_null(rr.front.positions.back());
    summary["front_at_half_threshold"] = flrd::detail::num_or_null(rr.diag.front_at_half_threshold);
    summary["front_at_double_threshold"] =
        flrd::detail::num_or_null(rr.diag.front_at_double_threshold);
    summary["obs_times"] = rr.obs_times;
    summary["masses"] = rr.masses;
    {
        json spd = json::array();
        for (double v : rr.front.speeds) spd.push_back(flrd::detail::num_or_null(v));
        summary["front_speeds"] = spd;
    }

    if (!std::isnan(so.compare_tw)) {
        const flrd::critical_speeds cs = find_crit(mp, c);
        const flrd::wave_profile w = flrd::build_wave(mp, so.compare_tw, cs);
        summary["compare_tw"] = compare_to_tw(rr.state, w);
    }

    const std::string fsum = out_file(c, "run.json");
    flrd::detail::write_text(fsum, summary.dump(2) + "\n");
    outputs.push_back(fsum);

    std::printf("steps=%zu t=%.6f u_max=%.6f front=%.6f\n", rr.diag.n_steps, rr.state.t,
                rr.diag.u_max_final, rr.front.positions.back());
    if (summary.contains("compare_tw"))
        std::printf("compare_tw: sup=%.6f l1=%.6f (window behind front)\n",
                    summary["compare_tw"]["sup_near_front"].get<double>(),
                    summary["compare_tw"]["l1_near_front"].get<double>());

    json opts;
    opts["config"] = c.config_path;
    opts["cfl"] = po.cfl;
    opts["bc"] = bcs;
    opts["t_end"] = t_end;
    if (!std::isnan(so.compare_tw)) opts["compare_tw"] = so.compare_tw;
    finish_manifest(c, "simulate", mp, opts, outputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flux-limited reaction-diffusion: traveling waves and evolution"};
    app.require_subcommand(1);
    app.set_version_flag("--version", flrd::version_string);

    common_opts c_cs, c_wave, c_orbit, c_sweep, c_sim, c_check;
    wave_opts wo;
    orbit_opts oo;
    sweep_opts so;
    simulate_opts sim;

    auto* cs = app.add_subcommand("critical-speeds",
                                  "locate the entropic and smoothness speed thresholds");
    add_common(cs, c_cs);

    auto* wv = app.add_subcommand("wave", "construct one traveling-wave profile");
    add_common(wv, c_wave);
    wv->add_option("--sigma", wo.sigma, "wave speed");
    wv->add_option("--sigma-kind", wo.sigma_kind, "ent | smooth (use the located threshold)");
    wv->add_flag("--asymptotics", wo.asymptotics, "append the near-jump power-law fit");
    wv->add_flag("--allow-nonentropic", wo.allow_nonentropic,
                 "below the entropic threshold, emit the inadmissible demo profile");

    auto* ob = app.add_subcommand("orbit", "integrate one phase-plane orbit");
    add_common(ob, c_orbit);
    ob->add_option("--sigma", oo.sigma, "wave speed");

    auto* sw = app.add_subcommand("sweep", "profiles for a speed list plus distance matrices");
    add_common(sw, c_sweep);
    sw->add_option("--sigma-list", so.sigma_list, "speeds (overrides config sigma_list)");

    auto* si = app.add_subcommand("simulate", "run the 1-D evolution from a JSON config");
    add_common(si, c_sim);
    si->add_option("--compare-tw", sim.compare_tw,
                   "overlay the traveling wave at this speed, aligned at the front");

    auto* ck = app.add_subcommand("check", "verify a manifest (outputs exist and hash-match)");
    add_common(ck, c_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cs->parsed()) return cmd_critical_speeds(c_cs);
        if (wv->parsed()) return cmd_wave(c_wave, wo);
        if (ob->parsed()) return cmd_orbit(c_orbit, oo);
        if (sw->parsed()) return cmd_sweep(c_sweep, so);
        if (si->parsed()) return cmd_simulate(c_sim, sim);
        if (ck->parsed()) return run_check(c_check);
        return 2;
    } catch (const flrd::error& e) {
        json j;
        j["error"] = {{"code", static_cast<int>(e.code())},
                      {"type", e.code() == flrd::errc::config
                                   ? "config"
                                   : (e.code() == flrd::errc::domain ? "domain" : "numerical")},
                      {"message", e.what()}};
        std::printf("%s\n", j.dump().c_str());
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"code", 4}, {"type", "numerical"}, {"message", e.what()}};
        std::printf("%s\n", j.dump().c_str());
        return 4;
    }
}
