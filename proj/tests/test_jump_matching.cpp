#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flrd/critical_speeds.hpp"
#include "flrd/jump_matching.hpp"
#include "flrd/phase_plane.hpp"

using namespace flrd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const model_params MP{};
}

TEST_CASE("power-difference quotient psi") {
    // m=2: psi(u+, x) = u+ + x
    CHECK_THAT(psi(2.0, 0.4, 0.17), WithinRel(0.57, 1e-15));
    // m=3: (0.5^3 - 0.25^3)/(0.5 - 0.25) = 0.4375
    CHECK_THAT(psi(3.0, 0.5, 0.25), WithinRel(0.4375, 1e-15));
    // coincidence limit psi(u,u) = m u^(m-1)
    CHECK_THAT(psi(3.0, 0.5, 0.5), WithinRel(0.75, 1e-12));
    // near coincidence both evaluation paths must agree with the Taylor value
    // m u^(m-1) - (m(m-1)/2) u^(m-2) (u - x); the guard sits between the two
    // probe offsets
    const double m = 2.7, u = 0.3;
    const double A = m * std::pow(u, m - 1.0);
    const double B = 0.5 * m * (m - 1.0) * std::pow(u, m - 2.0);
    for (double t : {0.5e-6, 2e-6}) {
        const double expect = A - B * u * t;
        CHECK_THAT(psi(m, u, u * (1.0 - t)), WithinRel(expect, 1e-9));
    }
}

TEST_CASE("jump partner at the window ends") {
    // sigma/c = psi(u+, 0) = u+^(m-1) lands the partner exactly at 0
    CHECK_THAT(solve_u_minus(MP, 0.4, 0.4), WithinAbs(0.0, 1e-12));
    // sigma/c = m u+^(m-1) collapses the jump
    CHECK_THAT(solve_u_minus(MP, 0.8, 0.4), WithinRel(0.4, 1e-10));
}

TEST_CASE("m=2 closed form") {
    // psi = u+ + u-: partner is sigma/c - u+
    for (double up : {0.35, 0.4, 0.45}) {
        const double um = solve_u_minus(MP, 0.6, up);
        CHECK_THAT(um, WithinAbs(0.6 - up, 1e-12));
    }
}

TEST_CASE("solved partner satisfies the jump condition to round-off") {
    model_params m3 = MP;
    m3.m = 2.6;
    for (double sigma : {0.5, 0.7, 0.9}) {
        const double up = 0.45;
        const double lo = std::pow(up, m3.m - 1.0), hi = m3.m * lo;
        if (sigma / m3.c < lo || sigma / m3.c > hi) continue;
        const double um = solve_u_minus(m3, sigma, up);
        CHECK_THAT(rh_speed(m3, up, um), WithinAbs(sigma, 1e-10));
    }
}

TEST_CASE("no admissible partner outside the window") {
    CHECK_THROWS_AS(solve_u_minus(MP, 0.3, 0.4), no_admissible_jump);   // below u+^(m-1)
    CHECK_THROWS_AS(solve_u_minus(MP, 0.81, 0.4), no_admissible_jump);  // above m u+^(m-1)
}

TEST_CASE("partner is monotone in the speed") {
    double prev = -1.0;
    for (double sigma = 0.41; sigma <= 0.79; sigma += 0.02) {
        const double um = solve_u_minus(MP, sigma, 0.4);
        CHECK(um > prev);
        prev = um;
    }
}

TEST_CASE("jump speed formula") {
    CHECK_THAT(rh_speed(MP, 0.4, 0.17), WithinRel(0.57, 1e-14));
    CHECK(rh_speed(MP, 0.17, 0.4) == rh_speed(MP, 0.4, 0.17));  // symmetric
    CHECK_THROWS_AS(rh_speed(MP, 0.4, 0.4), degenerate_jump);
}

TEST_CASE("jump pair carries its residual") {
    const jump_pair jp = make_jump_pair(MP, 0.57, 0.39013394);
    CHECK_THAT(jp.u_minus, WithinAbs(0.17986606, 1e-7));
    CHECK(std::abs(jp.rh_residual) <= 1e-10);
}

TEST_CASE("entropy verdicts") {
    SECTION("admissible decreasing jump with vertical traces") {
        const jump_report r = check_entropy_jump(MP, 0.57, 0.39013394, 0.17986606,
                                                 one_sided_slope::minus_inf,
                                                 one_sided_slope::minus_inf);
        CHECK(r.admissible);
        CHECK(r.reasons.empty());
        CHECK_THAT(r.rh_speed, WithinAbs(0.57, 1e-7));
    }
    SECTION("increasing jump rejected") {
        const jump_report r = check_entropy_jump(MP, 0.57, 0.17986606, 0.39013394,
                                                 one_sided_slope::minus_inf,
                                                 one_sided_slope::minus_inf);
        CHECK_FALSE(r.admissible);
        REQUIRE_FALSE(r.reasons.empty());
        CHECK(r.reasons.front().rfind("not_decreasing", 0) == 0);
    }
    SECTION("speed mismatch rejected") {
        const jump_report r = check_entropy_jump(MP, 0.8, 0.39, 0.18,
                                                 one_sided_slope::minus_inf,
                                                 one_sided_slope::minus_inf);
        CHECK_FALSE(r.admissible);
        bool rh = false;
        for (const auto& s : r.reasons) rh |= (s.rfind("rh_mismatch", 0) == 0);
        CHECK(rh);
    }
    SECTION("finite left slope rejected") {
        const jump_report r = check_entropy_jump(MP, 0.57, 0.39013394, 0.17986606,
                                                 one_sided_slope::finite,
                                                 one_sided_slope::minus_inf);
        CHECK_FALSE(r.admissible);
    }
    SECTION("jump to the vanishing state leaves the right trace unconstrained") {
        const jump_report r = check_entropy_jump(MP, 0.4378803339, 0.4378803339, 0.0,
                                                 one_sided_slope::minus_inf,
                                                 one_sided_slope::finite);
        CHECK(r.admissible);
    }
    SECTION("degenerate amplitude flagged, never throws") {
        const jump_report r = check_entropy_jump(MP, 0.6, 0.3, 0.3,
                                                 one_sided_slope::minus_inf,
                                                 one_sided_slope::minus_inf);
        CHECK_FALSE(r.admissible);
        bool flagged = false;
        for (const auto& s : r.reasons) flagged |= (s.rfind("degenerate_amplitude", 0) == 0);
        CHECK(flagged);
    }
}

TEST_CASE("orbit escape density feeds an admissible pair across the jump regime") {
    const critical_speeds cs = find_critical_speeds(MP);
    for (double f : {0.1, 0.5, 0.9}) {
        const double sigma = cs.ent_hi + f * (cs.smooth_lo - cs.ent_hi);
        const orbit orb = launch_and_integrate(MP, sigma);
        REQUIRE(orb.cls == orbit_class::type2);
        const double um = solve_u_minus(MP, sigma, orb.u_plus);
        // m=2 closed form: the pair sums to the speed
        CHECK_THAT(orb.u_plus + um, WithinAbs(sigma, 1e-9));
    }
}
