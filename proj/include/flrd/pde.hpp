#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "flrd/errors.hpp"
#include "flrd/reaction.hpp"

namespace flrd {

// Explicit 1-D finite-volume integrator for
//   u_t = d/dx [ nu u^m u_x / sqrt(u^2 + (nu/c)^2 u_x^2) ] + F(u).
// The flux saturates at c*u^m for steep gradients, which is what lets fronts
// sharpen into genuine discontinuities; the scheme must respect that limit.

struct grid1d {
    double x_min = 0.0, x_max = 1.0;
    std::size_t n_cells = 16;
    double dx = 0.0;
};

inline grid1d make_grid(double x_min, double x_max, std::size_t n_cells) {
    if (!(x_max > x_min)) throw config_error("make_grid: x_max must exceed x_min");
    if (n_cells < 16) throw config_error("make_grid: need at least 16 cells");
    grid1d g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_cells = n_cells;
    g.dx = (x_max - x_min) / static_cast<double>(n_cells);
    return g;
}

inline double cell_center(const grid1d& g, std::size_t i) {
    return g.x_min + (static_cast<double>(i) + 0.5) * g.dx;
}

enum class bc_kind { dirichlet_zero, neumann_zero };

inline const char* to_string(bc_kind b) {
    return b == bc_kind::dirichlet_zero ? "dirichlet_zero" : "neumann_zero";
}

struct pde_state {
    grid1d grid;
    std::vector<double> u;  // cell averages
    double t = 0.0;
};

// Pointwise flux function z(u, u_x); |z| <= c*u^m by construction.
inline double flux_z(const model_params& mp, double u_face, double du_dx) {
    if (!(u_face >= 0.0)) throw domain_error("flux_z: u_face must be >= 0");
    const double k = mp.nu / mp.c;
    const double denom = std::sqrt(u_face * u_face + k * k * du_dx * du_dx);
    if (denom < 1e-300) return 0.0;
    return mp.nu * std::pow(u_face, mp.m) * du_dx / denom;
}

struct pde_options {
    double cfl = 0.5;              // in (0, 0.5]
    double front_threshold = 0.01;
    bool record_snapshots = true;
};

struct front_trace {
    std::vector<double> times;
    std::vector<double> positions;  // NaN while no point reaches the threshold
    std::vector<double> speeds;     // backward differences; first entry NaN
};

struct pde_diagnostics {
    std::size_t n_steps = 0;
    double dt_last = 0.0;
    double u_max_final = 0.0;
    // front location at half / double threshold at t_end (threshold sensitivity)
    double front_at_half_threshold = std::numeric_limits<double>::quiet_NaN();
    double front_at_double_threshold = std::numeric_limits<double>::quiet_NaN();
};

struct run_result {
    pde_state state;
    front_trace front;
    std::vector<double> obs_times;
    std::vector<double> masses;
    std::vector<std::vector<double>> snapshots;  // empty if not recorded
    pde_diagnostics diag;
};

namespace detail {

struct pde_workspace {
    std::vector<double> ue;  // u with one ghost cell per side
    std::vector<double> sl;  // limited slopes (per extended cell)
    std::vector<double> z;   // face fluxes
    std::vector<double> u1;  // stage buffer
};

inline double minmod(double a, double b) {
    // 0 unless the arguments share a sign; then the smaller magnitude
    const double s = (a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0));
    return (a * b > 0.0) ? s * std::min(std::abs(a), std::abs(b)) : 0.0;
}

// One semi-discrete right-hand side evaluation: out_i = (z_{i+1} - z_i)/dx + F(u_i).
// Face states come from MUSCL/minmod reconstruction; the face value entering
// the saturated flux is the larger one-sided state (donor), which keeps the
// scheme monotone in the hyperbolic limit; the face gradient is two-point.
template <bool M2, bool FKPP>
inline void rhs_eval(const model_params& mp, const grid1d& g, bc_kind bc,
                     const std::vector<double>& u, std::vector<double>& out,
                     pde_workspace& ws) {
    const std::size_t n = g.n_cells;
    const double inv_dx = 1.0 / g.dx;
    const double k2 = (mp.nu / mp.c) * (mp.nu / mp.c);
    ws.ue.resize(n + 2);
    ws.sl.resize(n + 2);
    ws.z.resize(n + 1);
    double* ue = ws.ue.data();
    double* sl = ws.sl.data();
    double* z = ws.z.data();
    const double* uc = u.data();

    for (std::size_t i = 0; i < n; ++i) ue[i + 1] = uc[i];
    if (bc == bc_kind::dirichlet_zero) {
        ue[0] = 0.0;
        ue[n + 1] = 0.0;
    } else {
        ue[0] = ue[1];
        ue[n + 1] = ue[n];
    }

    sl[0] = 0.0;
    sl[n + 1] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) sl[i] = minmod(ue[i] - ue[i - 1], ue[i + 1] - ue[i]);

    for (std::size_t j = 0; j <= n; ++j) {
        const double ul = ue[j] + 0.5 * sl[j];
        const double ur = ue[j + 1] - 0.5 * sl[j + 1];
        const double uf = std::max(ul, ur);
        const double gd = (ue[j + 1] - ue[j]) * inv_dx;
        const double um = M2 ? uf * uf : std::pow(uf, mp.m);
        const double denom = std::sqrt(uf * uf + k2 * gd * gd);
        z[j] = mp.nu * um * gd / std::max(denom, 1e-300);
    }

    out.resize(n);
    double* o = out.data();
    if constexpr (FKPP) {
        for (std::size_t i = 0; i < n; ++i)
            o[i] = (z[i + 1] - z[i]) * inv_dx + uc[i] * (1.0 - uc[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            o[i] = (z[i + 1] - z[i]) * inv_dx + eval_F(mp.reaction, uc[i]);
    }
}

inline void rhs_dispatch(const model_params& mp, const grid1d& g, bc_kind bc,
                         const std::vector<double>& u, std::vector<double>& out,
                         pde_workspace& ws) {
    const bool m2 = (mp.m == 2.0);
    const bool fkpp = (mp.reaction.kind == reaction_kind::fkpp);
    if (m2 && fkpp)
        rhs_eval<true, true>(mp, g, bc, u, out, ws);
    else if (m2)
        rhs_eval<true, false>(mp, g, bc, u, out, ws);
    else if (fkpp)
        rhs_eval<false, true>(mp, g, bc, u, out, ws);
    else
        rhs_eval<false, false>(mp, g, bc, u, out, ws);
}

inline double stable_dt(const model_params& mp, const grid1d& g, double u_max, double cfl) {
    const double eps = 1e-30;
    const double umpow = (mp.m == 2.0) ? u_max : std::pow(u_max, mp.m - 1.0);
    const double dt_h = g.dx / (mp.m * mp.c * umpow + eps);
    const double dt_p = g.dx * g.dx / (2.0 * mp.nu * umpow + eps);
    return cfl * std::min(dt_h, dt_p);
}

// one SSP-RK2 step of size dt (already chosen); updates u in place
inline void ssp_rk2_step(const model_params& mp, const grid1d& g, bc_kind bc, double dt,
                         std::vector<double>& u, pde_workspace& ws, std::vector<double>& L) {
    const std::size_t n = g.n_cells;
    rhs_dispatch(mp, g, bc, u, L, ws);
    ws.u1.resize(n);
    double* u1 = ws.u1.data();
    const double* uc = u.data();
    const double* Lp = L.data();
    for (std::size_t i = 0; i < n; ++i) u1[i] = uc[i] + dt * Lp[i];
    rhs_dispatch(mp, g, bc, ws.u1, L, ws);
    double* um = u.data();
    for (std::size_t i = 0; i < n; ++i) um[i] = 0.5 * um[i] + 0.5 * (u1[i] + dt * Lp[i]);
}

}  // namespace detail

// Front position: first x from the right where u >= threshold, located by
// linear interpolation between cell centers; NaN when u < threshold everywhere.
inline double front_position(const pde_state& st, double threshold) {
    const std::size_t n = st.grid.n_cells;
    for (std::size_t i = n; i-- > 0;) {
        if (st.u[i] >= threshold) {
            const double xi = cell_center(st.grid, i);
            if (i + 1 >= n) return xi;
            const double un = st.u[i + 1];
            const double den = st.u[i] - un;
            if (den <= 0.0) return xi;
            return xi + st.grid.dx * std::min(1.0, (st.u[i] - threshold) / den);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline double total_mass(const pde_state& st) {
    double s = 0.0;
    for (double v : st.u) s += v;
    return s * st.grid.dx;
}

// One SSP-RK2 step with the stability-law dt; validates the contract bounds.
inline pde_state step(const model_params& mp, const pde_state& st, bc_kind bc, double cfl) {
    validate(mp);
    if (!(cfl > 0.0 && cfl <= 0.5)) throw config_error("step: cfl must lie in (0, 0.5]");
    if (st.u.size() != st.grid.n_cells) throw config_error("step: state/grid size mismatch");
    pde_state out = st;
    double u_max = 0.0;
    for (double v : st.u) u_max = std::max(u_max, std::abs(v));
    const double dt = detail::stable_dt(mp, st.grid, u_max, cfl);
    detail::pde_workspace ws;
    std::vector<double> L;
    detail::ssp_rk2_step(mp, st.grid, bc, dt, out.u, ws, L);
    out.t = st.t + dt;
    double post_max = 0.0;
    for (double v : out.u) {
        if (!std::isfinite(v)) throw non_finite("step: non-finite cell value");
        post_max = std::max(post_max, std::abs(v));
    }
    if (post_max > 1.0 + 1e-12)
        throw cfl_violation("step: post-step max |u| = " + std::to_string(post_max) +
                            " exceeds 1 + 1e-12");
    return out;
}

// Advances to t_end, landing exactly on each observer time and recording the
// front position and mass there (plus at the start and at t_end).
inline run_result run(const model_params& mp, const pde_state& initial, bc_kind bc, double t_end,
                      std::vector<double> observers, const pde_options& opt = {}) {
    validate(mp);
    if (!(opt.cfl > 0.0 && opt.cfl <= 0.5)) throw config_error("run: cfl must lie in (0, 0.5]");
    if (!(t_end > initial.t)) throw config_error("run: t_end must exceed the initial time");
    if (initial.u.size() != initial.grid.n_cells)
        throw config_error("run: state/grid size mismatch");

    observers.push_back(t_end);
    std::sort(observers.begin(), observers.end());
    observers.erase(std::unique(observers.begin(), observers.end()), observers.end());

    run_result res;
    res.state = initial;
    auto record = [&](double t) {
        res.obs_times.push_back(t);
        res.masses.push_back(total_mass(res.state));
        const double pos = front_position(res.state, opt.front_threshold);
        res.front.times.push_back(t);
        res.front.positions.push_back(pos);
        if (res.front.positions.size() == 1) {
            res.front.speeds.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            const std::size_t k = res.front.positions.size() - 1;
            const double dtk = res.front.times[k] - res.front.times[k - 1];
            res.front.speeds.push_back(
                dtk > 0.0 ? (res.front.positions[k] - res.front.positions[k - 1]) / dtk
                          : std::numeric_limits<double>::quiet_NaN());
        }
        if (opt.record_snapshots) res.snapshots.push_back(res.state.u);
    };
    record(initial.t);

    detail::pde_workspace ws;
    std::vector<double> L;
    std::size_t obs_idx = 0;
    while (obs_idx < observers.size() && observers[obs_idx] <= initial.t) ++obs_idx;

    double u_max = 0.0;
    for (double v : res.state.u) u_max = std::max(u_max, std::abs(v));

    while (res.state.t < t_end - 1e-14 * std::max(1.0, t_end)) {
        double dt = detail::stable_dt(mp, res.state.grid, u_max, opt.cfl);
        const double t_next_obs = observers[obs_idx];
        bool at_obs = false;
        if (res.state.t + dt >= t_next_obs - 1e-14 * std::max(1.0, t_next_obs)) {
            dt = t_next_obs - res.state.t;
            at_obs = true;
        }
        detail::ssp_rk2_step(mp, res.state.grid, bc, dt, res.state.u, ws, L);
        res.state.t = at_obs ? t_next_obs : res.state.t + dt;
        ++res.diag.n_steps;
        res.diag.dt_last = dt;

        u_max = 0.0;
        for (double v : res.state.u) u_max = std::max(u_max, std::abs(v));
        if (u_max > 1.0 + 1e-12)
            throw cfl_violation("run: max |u| = " + std::to_string(u_max) +
                                " exceeds 1 + 1e-12 at t=" + std::to_string(res.state.t));
        // NaN slips through max(); scan for it explicitly now and then
        if ((res.diag.n_steps & 63u) == 0) {
            for (double v : res.state.u)
                if (!std::isfinite(v))
                    throw non_finite("run: non-finite state at t=" + std::to_string(res.state.t));
        }

        if (at_obs) {
            record(res.state.t);
            ++obs_idx;
            if (obs_idx >= observers.size()) break;
        }
    }
    for (double v : res.state.u)
        if (!std::isfinite(v)) throw non_finite("run: non-finite final state");
    res.diag.u_max_final = u_max;
    res.diag.front_at_half_threshold = front_position(res.state, 0.5 * opt.front_threshold);
    res.diag.front_at_double_threshold = front_position(res.state, 2.0 * opt.front_threshold);
    return res;
}

struct l1_report {
    double max_ratio = 0.0;
    double lipschitz = 0.0;
    bool pass = false;
    double slack = 0.05;
};

// Largest Lipschitz constant of the source on [0,1] (exact for fkpp).
inline double lipschitz_F(const reaction_spec& r) {
    if (r.kind == reaction_kind::fkpp) return 1.0;
    double lmax = 0.0;
    double prev = eval_F(r, 0.0);
    const int n = 4096;
    for (int i = 1; i <= n; ++i) {
        const double cur = eval_F(r, static_cast<double>(i) / n);
        lmax = std::max(lmax, std::abs(cur - prev) * n);
        prev = cur;
    }
    return lmax;
}

// Checks the L1 contraction-with-growth bound between two recorded runs:
// ||u(t) - v(t)||_1 <= e^(L t) ||u0 - v0||_1 up to scheme slack.
inline l1_report l1_stability_check(const model_params& mp, const run_result& a,
                                    const run_result& b, double slack = 0.05) {
    if (a.snapshots.empty() || b.snapshots.empty())
        throw config_error("l1_stability_check: runs must record snapshots");
    if (a.snapshots.size() != b.snapshots.size() ||
        a.state.grid.n_cells != b.state.grid.n_cells ||
        std::abs(a.state.grid.dx - b.state.grid.dx) > 1e-15)
        throw config_error("l1_stability_check: runs must share grid and observer times");
    for (std::size_t k = 0; k < a.obs_times.size(); ++k)
        if (std::abs(a.obs_times[k] - b.obs_times[k]) > 1e-12)
            throw config_error("l1_stability_check: observer times differ");

    l1_report rep;
    rep.slack = slack;
    rep.lipschitz = lipschitz_F(mp.reaction);
    const double dx = a.state.grid.dx;
    auto l1 = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
        return s * dx;
    };
    const double d0 = l1(a.snapshots.front(), b.snapshots.front());
    const double t0 = a.obs_times.front();
    for (std::size_t k = 1; k < a.snapshots.size(); ++k) {
        const double dk = l1(a.snapshots[k], b.snapshots[k]);
        const double bound = std::exp(rep.lipschitz * (a.obs_times[k] - t0)) * d0;
        const double ratio = (bound > 0.0) ? dk / bound
                                           : (dk == 0.0 ? 0.0
                                                        : std::numeric_limits<double>::infinity());
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    rep.pass = rep.max_ratio <= 1.0 + slack;
    return rep;
}

// cos^2 bump of the given height on (center - half_width, center + half_width)
inline pde_state make_bump(const grid1d& g, double center, double half_width, double height) {
    if (!(half_width > 0.0)) throw config_error("make_bump: half_width must be > 0");
    if (!(height >= 0.0 && height <= 1.0))
        throw config_error("make_bump: height must lie in [0, 1]");
    pde_state st;
    st.grid = g;
    st.u.assign(g.n_cells, 0.0);
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = cell_center(g, i);
        const double yrel = (x - center) / half_width;
        if (std::abs(yrel) < 1.0) {
            const double cs = std::cos(0.5 * pi * yrel);
            st.u[i] = height * cs * cs;
        }
    }
    return st;
}

// smooth monotone step: height/2 * (1 - tanh((x - x0)/width))
inline pde_state make_step(const grid1d& g, double x0, double width, double height) {
    if (!(width > 0.0)) throw config_error("make_step: width must be > 0");
    if (!(height >= 0.0 && height <= 1.0))
        throw config_error("make_step: height must lie in [0, 1]");
    pde_state st;
    st.grid = g;
    st.u.assign(g.n_cells, 0.0);
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = cell_center(g, i);
        st.u[i] = 0.5 * height * (1.0 - std::tanh((x - x0) / width));
    }
    return st;
}

}  // namespace flrd
