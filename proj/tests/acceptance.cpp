// Acceptance gate. Runs every deliverable criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion with the measured numbers.
// Exit code 0 only if every line passes. The PDE criteria (8, 9) dominate the
// runtime; expect roughly half an hour on one core.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "flrd/critical_speeds.hpp"
#include "flrd/jump_matching.hpp"
#include "flrd/pde.hpp"
#include "flrd/phase_plane.hpp"
#include "flrd/profile.hpp"
#include "flrd/reaction.hpp"

using namespace flrd;

namespace {

// ---- pinned tolerances (the contract, not knobs) ---------------------------
constexpr double kSigmaEntRef = 0.437803;     // published 6-digit threshold
constexpr double kSigmaSmoothRef = 0.661621;  // published 6-digit threshold
constexpr double kTolSigma = 1e-3;
constexpr double kBudget1Sec = 10.0;

constexpr double kTolBifurcation = 1e-4;  // |u_plus - u_star| at sigma_smooth
constexpr double kUStarRef = 0.3308;
constexpr double kTolUStarRef = 1e-3;

constexpr double kTolRH = 1e-8;  // m=2 closed form u+ + u- = sigma

constexpr double kTolSlopeRel = 0.01;  // entry slopes, 1 %

constexpr double kExponentRef = 2.0 / 3.0;  // near-jump power law at sigma_ent
constexpr double kTolExponent = 0.05;
constexpr double kTolAmplitudeRel = 0.10;

constexpr double kTolOrdering = 1e-9;  // monotonicity suites: zero violations

constexpr double kFrontFactor = 1.05;  // front speed <= sigma_ent * this
constexpr double kTolShape = 0.05;     // near-front sup distance to the wave
constexpr double kBudget8Sec = 120.0;

constexpr double kL1RatioMax = 1.05;

constexpr double kMassFactor = 5.0;  // residual <= 5 dx per unit time

const model_params MP{};  // nu = c = 1, m = 2, fkpp

int n_pass = 0, n_fail = 0;

void line(int idx, bool ok, const char* fmt, ...) {
    (ok ? n_pass : n_fail)++;
    std::printf("[%s] criterion %d: ", ok ? "PASS" : "FAIL", idx);
    va_list ap;
    va_start(ap, fmt);
    std::vprintf(fmt, ap);
    va_end(ap);
    std::printf("\n");
    std::fflush(stdout);
}

void crashed(int idx, const std::exception& e) {
    line(idx, false, "threw: %s", e.what());
}

double now_sec() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

// r on the orbit at a given u (samples are ordered by decreasing u)
double orbit_r_at(const orbit& orb, double u) {
    const auto& s = orb.samples;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].u <= u) {
            const double w = (u - s[i].u) / (s[i - 1].u - s[i].u);
            return s[i].r + w * (s[i - 1].r - s[i].r);
        }
    }
    return s.back().r;
}

// entry slope dr/du at u -> 1, least squares through the saddle (r(1) = 0)
double fitted_entry_slope(const orbit& orb) {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : orb.samples) {
        const double d = 1.0 - p.u;
        if (d < 1e-5 || d > 1e-3) continue;
        sxy += p.r * (p.u - 1.0);
        sxx += d * d;
    }
    return sxy / sxx;
}

// ---- criteria ---------------------------------------------------------------

critical_speeds criterion_1() {
    const double t0 = now_sec();
    const critical_speeds cs = find_critical_speeds(MP);
    const double dt = now_sec() - t0;
    const double e_ent = std::abs(cs.sigma_ent - kSigmaEntRef);
    const double e_sm = std::abs(cs.sigma_smooth - kSigmaSmoothRef);
    line(1, e_ent <= kTolSigma && e_sm <= kTolSigma && dt < kBudget1Sec,
         "sigma_ent=%.7f (ref %.6f, diff %.1e), sigma_smooth=%.7f (ref %.6f, diff %.1e), "
         "%.2f s < %.0f s",
         cs.sigma_ent, kSigmaEntRef, e_ent, cs.sigma_smooth, kSigmaSmoothRef, e_sm, dt,
         kBudget1Sec);
    return cs;
}

void criterion_2(const critical_speeds& cs) {
    // just below the smoothness threshold the escape value must meet u_star
    const orbit orb = launch_and_integrate(MP, cs.smooth_lo);
    const double us = u_star(MP, cs.sigma_smooth);
    const double gap = std::abs(orb.u_plus - us);
    line(2, gap <= kTolBifurcation && std::abs(us - kUStarRef) <= kTolUStarRef,
         "|u_plus - u_star| = %.2e <= %.0e at the smoothness threshold (u_star=%.6f, ref %.4f)",
         gap, kTolBifurcation, us, kUStarRef);
}

void criterion_3(const critical_speeds& cs) {
    double worst = 0.0;
    const int n = 20;
    for (int k = 1; k <= n; ++k) {
        const double sg = cs.sigma_ent + (cs.sigma_smooth - cs.sigma_ent) * k / (n + 1.0);
        phase_options po;
        po.classify_only = true;
        const orbit orb = launch_and_integrate(MP, sg, po);
        const jump_pair jp = make_jump_pair(MP, sg, orb.u_plus);
        worst = std::max(worst, std::abs(jp.u_plus + jp.u_minus - sg));
    }
    line(3, worst <= kTolRH, "max |u_plus + u_minus - sigma| = %.2e <= %.0e over %d speeds",
         worst, kTolRH, n);
}

void criterion_4() {
    const double ref1 = -2.0 / (1.0 + std::sqrt(5.0));
    const double got1 = fitted_entry_slope(launch_and_integrate(MP, 1.0));
    const double ref0 = -1.0;
    const double got0 = fitted_entry_slope(launch_and_integrate(MP, 0.0));
    const double rel1 = std::abs(got1 - ref1) / std::abs(ref1);
    const double rel0 = std::abs(got0 - ref0) / std::abs(ref0);
    line(4, rel1 <= kTolSlopeRel && rel0 <= kTolSlopeRel,
         "entry slope at sigma=1: %.6f vs %.6f (rel %.1e); at sigma=0: %.6f vs %.6f (rel %.1e)",
         got1, ref1, rel1, got0, ref0, rel0);
}

void criterion_5(const critical_speeds& cs) {
    const wave_profile w = build_wave(MP, cs.sigma_ent, cs);
    const asymptotics as = jump_asymptotics(MP, cs.sigma_ent, w);
    const double amp_rel = std::abs(as.left.coeff - as.left.beta_ref) / as.left.beta_ref;
    line(5,
         as.left.present && std::abs(as.left.exponent - kExponentRef) <= kTolExponent &&
             amp_rel <= kTolAmplitudeRel,
         "left exponent %.4f (ref %.4f +- %.2f), amplitude %.4f vs closed form %.4f "
         "(rel %.3f <= %.2f), %d samples",
         as.left.exponent, kExponentRef, kTolExponent, as.left.coeff, as.left.beta_ref,
         amp_rel, kTolAmplitudeRel, static_cast<int>(as.left.n_samples));
}

void criterion_6(const critical_speeds& cs) {
    // orbits for slower speeds lie above in r; escape value falls, jump
    // partner rises
    const int n = 10;
    std::vector<orbit> orbs;
    std::vector<double> sigmas, uplus, uminus;
    for (int i = 0; i < n; ++i) {
        const double sg = cs.ent_hi + (cs.smooth_lo - cs.ent_hi) * i / (n - 1.0);
        sigmas.push_back(sg);
        orbs.push_back(launch_and_integrate(MP, sg));
        uplus.push_back(orbs.back().u_plus);
        uminus.push_back(make_jump_pair(MP, sg, orbs.back().u_plus).u_minus);
    }
    int violations = 0;
    for (int j = 0; j < n; ++j) {
        const double u = 0.50 + 0.45 * j / (n - 1.0);
        for (int i = 0; i + 1 < n; ++i)
            if (orbit_r_at(orbs[i], u) < orbit_r_at(orbs[i + 1], u) - kTolOrdering)
                ++violations;
    }
    int mono = 0;
    for (int i = 0; i + 1 < n; ++i) {
        if (uplus[i + 1] >= uplus[i] - kTolOrdering) ++mono;
        if (uminus[i + 1] <= uminus[i] + kTolOrdering) ++mono;
    }
    line(6, violations == 0 && mono == 0,
         "orbit ordering on a %dx%d grid: %d violations; u_plus/u_minus monotonicity: %d "
         "violations (tol %.0e)",
         n, n, violations, mono, kTolOrdering);
}

void criterion_7(const critical_speeds& cs) {
    const double bases[4] = {cs.sigma_ent, 0.57, cs.sigma_smooth, 1.0};
    const double deltas[3] = {1e-1, 1e-2, 1e-3};
    bool ok = true;
    std::printf("    criterion 7 detail (sup / l1):\n");
    for (double sg : bases) {
        const wave_profile base = build_wave(MP, sg, cs);
        double prev_sup = 1e300, prev_lp = 1e300;
        std::printf("      sigma=%.6f:", sg);
        for (double d : deltas) {
            const wave_profile pert = build_wave(MP, sg + d, cs);
            const distance_result dist = wave_distance(base, pert, 1.0);
            ok = ok && dist.sup < prev_sup && dist.lp < prev_lp;
            prev_sup = dist.sup;
            prev_lp = dist.lp;
            std::printf("  %.3e/%.3e", dist.sup, dist.lp);
        }
        std::printf("\n");
    }
    line(7, ok, "wave distances shrink monotonically as delta drops 1e-1 -> 1e-3 at 4 speeds");
}

void criterion_8(const critical_speeds& cs) {
    // compact bump, absorbing boundaries, dx = 1/400, t_end = 30
    const double t0 = now_sec();
    const grid1d g = make_grid(-3.0, 17.0, 8000);
    const pde_state init = make_bump(g, 0.0, 2.0, 0.9);
    pde_options po;
    po.record_snapshots = false;
    const run_result rr = run(MP, init, bc_kind::dirichlet_zero, 30.0, {20.0, 25.0}, po);
    const double elapsed = now_sec() - t0;

    // late-time speed from the last 10 time units
    const std::size_t nf = rr.front.positions.size();
    const double speed =
        (rr.front.positions[nf - 1] - rr.front.positions[nf - 3]) /
        (rr.front.times[nf - 1] - rr.front.times[nf - 3]);

    // shape: align the entropic wave at the half-amplitude crossing and take
    // the sup over the trailing half-unit window (jump smear excluded)
    const wave_profile w = build_wave(MP, cs.sigma_ent, cs);
    const wave_sampler sample(w);
    const double level = 0.5 * w.u_plus;
    const double x_f = front_position(rr.state, level);
    if (!std::isfinite(x_f)) {
        line(8, false, "no front at the half-amplitude level; cannot align the wave");
        return;
    }
    double sup = 0.0;
    const double lo = x_f - 0.5 - 10.0 * g.dx, hi = x_f - 10.0 * g.dx;
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = cell_center(g, i);
        if (x < lo || x > hi) continue;
        sup = std::max(sup, std::abs(rr.state.u[i] - sample(x - x_f)));
    }

    line(8, speed <= cs.sigma_ent * kFrontFactor && sup <= kTolShape,
         "late front speed %.4f <= %.4f and near-front sup %.4f <= %.2f (dx=1/400, t=30)",
         speed, cs.sigma_ent * kFrontFactor, sup, kTolShape);
    // The stated 2-minute budget is not reachable for this recipe with the
    // explicit SSP-RK2 scheme: dt ~ dx^2/2 means ~1.9e7 steps over 8000 cells
    // on one core. Reported as measured, not gamed by shrinking the run.
    line(8, elapsed < kBudget8Sec, "runtime %.0f s vs stated %.0f s budget (%zu steps)",
         elapsed, kBudget8Sec, rr.diag.n_steps);
}

void criterion_9() {
    const double t0 = now_sec();
    const grid1d g = make_grid(-4.5, 4.5, 3600);  // dx = 1/400
    const std::vector<double> obs = {1.0, 2.0, 3.0, 4.0, 5.0};
    const run_result ra = run(MP, make_bump(g, 0.0, 1.5, 0.70), bc_kind::dirichlet_zero, 5.0,
                              obs, {});
    const run_result rb = run(MP, make_bump(g, 0.2, 1.5, 0.72), bc_kind::dirichlet_zero, 5.0,
                              obs, {});
    const l1_report rep = l1_stability_check(MP, ra, rb);
    line(9, rep.max_ratio <= kL1RatioMax,
         "l1 growth ratio %.4f <= %.2f for nearby bumps (dx=1/400, t<=5, %.0f s)",
         rep.max_ratio, kL1RatioMax, now_sec() - t0);
}

void criterion_10() {
    // (a) discrete maximum principle over random data
    const grid1d g = make_grid(0.0, 2.0, 400);
    std::mt19937_64 rng(424242);  // fixed seed: reproducible
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> u(g.n_cells);
    for (auto& v : u) v = uni(rng);
    detail::pde_workspace ws;
    std::vector<double> L;
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 10000; ++k) {
        double umax = 0.0;
        for (double v : u) umax = std::max(umax, v);
        detail::ssp_rk2_step(MP, g, bc_kind::neumann_zero, detail::stable_dt(MP, g, umax, 0.25),
                             u, ws, L);
        for (double v : u) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const bool bounds_ok = lo >= 0.0 && hi <= 1.0 + 1e-12;

    // (b) mass balance with zero-flux boundaries: the flux telescopes away,
    // leaving only reaction quadrature error
    const grid1d gm = make_grid(-4.0, 4.0, 400);
    pde_state st = make_bump(gm, 0.0, 1.5, 0.8);
    const double t_end = 1.0;
    const double mass0 = total_mass(st);
    double react = 0.0;
    while (st.t < t_end - 1e-12) {
        double umax = 0.0;
        for (double v : st.u) umax = std::max(umax, v);
        double dt = std::min(detail::stable_dt(MP, gm, umax, 0.5), t_end - st.t);
        double f0 = 0.0;
        for (double v : st.u) f0 += eval_F(MP.reaction, v);
        detail::ssp_rk2_step(MP, gm, bc_kind::neumann_zero, dt, st.u, ws, L);
        double f1 = 0.0;
        for (double v : st.u) f1 += eval_F(MP.reaction, v);
        react += 0.5 * (f0 + f1) * gm.dx * dt;
        st.t += dt;
    }
    const double residual = std::abs((total_mass(st) - mass0) - react) / t_end;
    const bool mass_ok = residual <= kMassFactor * gm.dx;

    line(10, bounds_ok && mass_ok,
         "max principle over 1e4 random steps: u in [%.2e, 1 + %.2e]; mass residual %.2e <= "
         "%.2e per unit time",
         lo, hi - 1.0, residual, kMassFactor * gm.dx);
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    critical_speeds cs;
    try {
        cs = criterion_1();
    } catch (const std::exception& e) {
        crashed(1, e);
        std::printf("acceptance: criterion 1 failed, later criteria need its thresholds\n");
        return 1;
    }
    try { criterion_2(cs); }  catch (const std::exception& e) { crashed(2, e); }
    try { criterion_3(cs); }  catch (const std::exception& e) { crashed(3, e); }
    try { criterion_4(); }    catch (const std::exception& e) { crashed(4, e); }
    try { criterion_5(cs); }  catch (const std::exception& e) { crashed(5, e); }
    try { criterion_6(cs); }  catch (const std::exception& e) { crashed(6, e); }
    try { criterion_7(cs); }  catch (const std::exception& e) { crashed(7, e); }
    try { criterion_8(cs); }  catch (const std::exception& e) { crashed(8, e); }
    try { criterion_9(); }    catch (const std::exception& e) { crashed(9, e); }
    try { criterion_10(); }   catch (const std::exception& e) { crashed(10, e); }

    std::printf("acceptance: %d passed, %d failed\n", n_pass, n_fail);
    return n_fail == 0 ? 0 : 1;
}
