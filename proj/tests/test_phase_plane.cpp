#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flrd/errors.hpp"
#include "flrd/phase_plane.hpp"

using namespace flrd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const model_params MP{};  // nu=c=1, m=2, fkpp
}

TEST_CASE("stall density u_star") {
    CHECK_THAT(u_star(MP, 0.6617769580), WithinRel(0.330888479, 1e-8));
    CHECK(u_star(MP, 0.0) == 0.0);
    model_params m3 = MP;
    m3.m = 3.0;
    // (sigma/(c m))^(1/(m-1)) = sqrt(0.6/3)
    CHECK_THAT(u_star(m3, 0.6), WithinRel(std::sqrt(0.2), 1e-14));
}

TEST_CASE("asymptotic inclination r_star") {
    // a = nu K(0)/(c sigma) = 1 at sigma=1: r* = 1/sqrt(2)
    CHECK_THAT(r_star(MP, 1.0), WithinRel(1.0 / std::sqrt(2.0), 1e-14));
    CHECK_THROWS_AS(r_star(MP, 0.0), domain_error);
    CHECK_THROWS_AS(r_star(MP, -1.0), domain_error);
}

TEST_CASE("entry slope at the saturated state") {
    // lambda = 2 nu K'(1) / (c (sigma + sqrt(sigma^2 - 4 K'(1) nu)))
    CHECK_THAT(lambda_sigma(MP, 1.0), WithinRel(-2.0 / (1.0 + std::sqrt(5.0)), 1e-14));
    CHECK_THAT(lambda_sigma(MP, 3.0), WithinRel(-2.0 / (3.0 + std::sqrt(13.0)), 1e-14));
    CHECK_THAT(lambda_sigma(MP, 0.0), WithinRel(-1.0, 1e-14));  // -sqrt(|K'(1)| nu)/c
}

TEST_CASE("graph-chart slope field: hand-evaluated point") {
    // sigma=1, u=r=1/2: 1/(c u^2) * sigma - m r/u - K(u)/u^2 * s/r
    //                 = 4 - 2 - 2 sqrt(3) + ... collected: 2 - 2 sqrt(3)
    CHECK_THAT(graph_rhs(MP, 1.0, 0.5, 0.5), WithinRel(2.0 - 2.0 * std::sqrt(3.0), 1e-13));
    // regular through the vertical tangent: finite value at r=1
    CHECK(std::isfinite(graph_rhs(MP, 0.5, 0.45, 1.0)));
}

TEST_CASE("orbit classification flips between the known regimes") {
    orbit slow = launch_and_integrate(MP, 0.3);
    CHECK(slow.cls == orbit_class::type2);
    CHECK(slow.u_plus > 0.0);

    orbit fast = launch_and_integrate(MP, 1.0);
    CHECK(fast.cls == orbit_class::type1);
    CHECK(std::isnan(fast.u_plus));
}

TEST_CASE("escape densities match an independent reference integration") {
    // frozen from a separately implemented adaptive integrator (rtol 1e-12)
    struct ref {
        double sigma, u_plus;
    };
    const ref table[] = {
        {0.0, 0.5408685457},  {0.3, 0.4762119204}, {0.5, 0.4173993697},
        {0.57, 0.3901339380}, {0.6, 0.3761396088},
    };
    for (const auto& t : table) {
        orbit orb = launch_and_integrate(MP, t.sigma);
        REQUIRE(orb.cls == orbit_class::type2);
        CHECK_THAT(orb.u_plus, WithinAbs(t.u_plus, 2e-6));
    }
}

TEST_CASE("type1 orbit settles onto the asymptotic inclination") {
    phase_options po;
    po.u_floor = 1e-6;
    orbit orb = launch_and_integrate(MP, 1.0, po);
    REQUIRE(orb.cls == orbit_class::type1);
    REQUIRE_FALSE(orb.samples.empty());
    const auto& last = orb.samples.back();
    CHECK(last.u <= 1e-5);
    // r(u) -> r* with O(u) correction
    CHECK_THAT(last.r, WithinAbs(r_star(MP, 1.0), 1e-4));
}

TEST_CASE("samples descend in u and stay inside the chart") {
    orbit orb = launch_and_integrate(MP, 0.57);
    REQUIRE(orb.samples.size() > 10);
    for (std::size_t i = 1; i < orb.samples.size(); ++i) {
        CHECK(orb.samples[i].u < orb.samples[i - 1].u);
        CHECK(orb.samples[i].r >= 0.0);
        CHECK(orb.samples[i].r <= 1.0);
        // chart consistency: s = sqrt(1 - r^2)
        const double s2 = orb.samples[i].r * orb.samples[i].r +
                          orb.samples[i].s * orb.samples[i].s;
        CHECK_THAT(s2, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("continuation branch leaves the vertical tangent and decays") {
    orbit orb = integrate_type3(MP, 0.57, 0.1798660620);
    CHECK(orb.cls == orbit_class::type3);
    REQUIRE(orb.samples.size() > 10);
    CHECK_THAT(orb.samples.front().r, WithinAbs(1.0, 1e-12));
    CHECK(orb.samples.back().u < 1e-5);
    // decays toward the same asymptotic inclination as a full orbit
    CHECK_THAT(orb.samples.back().r, WithinAbs(r_star(MP, 0.57), 1e-3));
}

TEST_CASE("continuation branch completes when the plateau sits above r=0.9") {
    // slow speeds park the tail at r* > 0.9; this used to bypass the implicit
    // tail marcher and grind the explicit integrator into a step underflow
    const double sigma = 0.4479;
    REQUIRE(r_star(MP, sigma) > 0.9);
    orbit orb = integrate_type3(MP, sigma, 0.0131);
    REQUIRE_FALSE(orb.samples.empty());
    CHECK(orb.samples.back().u <= 1e-5);
    CHECK_THAT(orb.r_limit, WithinAbs(r_star(MP, sigma), 1e-3));
    CHECK(orb.n_steps < 100'000);  // handed off, not ground out
}

TEST_CASE("adaptive integrator finishes a decreasing run at t_end") {
    // the clamped last step must carry the direction's sign
    auto rhs = [](double t, const vec<1>&, vec<1>& dy) { dy[0] = -2.0 * t; };
    ode_options oo;
    oo.rtol = 1e-10;
    oo.atol = 1e-12;
    auto obs = [](const ode_step<1>&, double&) { return ode_flow::run; };
    const auto res = integrate_adaptive<1>(rhs, 1.0, vec<1>{0.0}, 1e-6, oo, obs);
    CHECK(res.t == 1e-6);  // snapped exactly onto the endpoint
    CHECK_THAT(res.y[0], WithinAbs(1.0 - 1e-12, 1e-10));
    CHECK_FALSE(res.stopped_by_observer);
}

TEST_CASE("continuation branch domain errors") {
    CHECK_THROWS_AS(integrate_type3(MP, 0.57, 0.5), domain_error);   // above stall density
    CHECK_THROWS_AS(integrate_type3(MP, 0.57, 1e-9), domain_error);  // below floor
    CHECK_THROWS_AS(integrate_type3(MP, -0.5, 0.1), domain_error);
}

TEST_CASE("launch parameter validation") {
    CHECK_THROWS_AS(launch_and_integrate(MP, -0.1), domain_error);
    phase_options po;
    po.launch_eps = 0.5;
    CHECK_THROWS_AS(launch_and_integrate(MP, 0.5, po), config_error);
}

TEST_CASE("classification is insensitive to the launch offset") {
    for (double sigma : {0.45, 0.6}) {
        phase_options a, b;
        a.launch_eps = 1e-6;
        b.launch_eps = 1e-7;
        orbit oa = launch_and_integrate(MP, sigma, a);
        orbit ob = launch_and_integrate(MP, sigma, b);
        REQUIRE(oa.cls == ob.cls);
        if (oa.cls == orbit_class::type2) CHECK_THAT(oa.u_plus, WithinAbs(ob.u_plus, 1e-7));
    }
}

TEST_CASE("degenerate power-law rate exhausts the inclination") {
    // K(0)=0 when p>1: no positive asymptotic inclination exists and the
    // orbit flattens; the integrator must stop cleanly rather than grind
    model_params mp = MP;
    mp.reaction = {reaction_kind::power_law, 2.0, 1.0};
    orbit orb = launch_and_integrate(mp, 1.2);
    CHECK((orb.cls == orbit_class::type1 || orb.cls == orbit_class::type2));
}
