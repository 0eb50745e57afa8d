// Plant model: parameter validation, control-affine structure, guard
// behaviour, and the instantaneous power balance of the stored energy.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <cpldamp/cpldamp.hpp>

#include "helpers.hpp"

using namespace cpldamp;

TEST_CASE("parameter validation rejects non-positive entries") {
    PlantParams p = default_plant();
    REQUIRE_NOTHROW(p.validate());

    p.C1 = 0.0;
    REQUIRE_THROWS_AS(p.validate(), std::domain_error);
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("C1"));

    p = default_plant();
    p.r3 = -1.0;
    REQUIRE_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("r3"));

    REQUIRE_THROWS_AS(CplPower(-1.0), std::domain_error);
    REQUIRE(CplPower(250.0).watts == 250.0);
}

TEST_CASE("source-side dynamics vanish at the source-side equilibria") {
    const PlantParams p = default_plant();
    const auto eq = open_loop_equilibria(p, CplPower(100.0));
    REQUIRE(eq.high.has_value());
    REQUIRE(eq.low.has_value());

    for (const OpenLoopState& s : {*eq.high, *eq.low}) {
        const auto ds = open_loop_dynamics(s, p, CplPower(100.0));
        // Scale by the largest individual term feeding each equation.
        CHECK(std::abs(ds.di1) < 1e-9 * (p.E / p.L1));
        CHECK(std::abs(ds.dv1) < 1e-9 * (s.i1 / p.C1));
    }
}

TEST_CASE("closed-loop dynamics are affine in the duty cycle") {
    auto rng = testutil::seeded_rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pt = testutil::random_admissible(rng);
        const auto eq = assignable_equilibrium(pt.p, CplPower(pt.P), pt.x2bar);
        const NetworkState x = testutil::perturbed(rng, eq.xbar);
        const double u = testutil::uniform(rng, 0.0, 1.0);

        const VectorFields vf = vector_fields(x, pt.p, CplPower(pt.P));
        const auto dx = closed_loop_dynamics(x, u, pt.p, CplPower(pt.P));

        // Exact floating-point identity: the closed loop is composed from
        // the drift and input fields with no rearrangement.
        const double composed[4] = {vf.f[0] + vf.g[0] * u, vf.f[1] + vf.g[1] * u,
                                    vf.f[2] + vf.g[2] * u, vf.f[3] + vf.g[3] * u};
        CHECK(dx[0] == composed[0]);
        CHECK(dx[1] == composed[1]);
        CHECK(dx[2] == composed[2]);
        CHECK(dx[3] == composed[3]);

        // The drift field carries no duty-cycle dependence in rows 1-2.
        CHECK(vf.g[0] == 0.0);
        CHECK(vf.g[1] == 0.0);
    }
}

TEST_CASE("duty cycle outside [0,1] is rejected") {
    const PlantParams p = default_plant();
    const NetworkState x{10.0, 20.0, 1.0, 30.0};
    REQUIRE_THROWS_AS(closed_loop_dynamics(x, -0.01, p, CplPower(100.0)),
                      std::domain_error);
    REQUIRE_THROWS_AS(closed_loop_dynamics(x, 1.01, p, CplPower(100.0)),
                      std::domain_error);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(closed_loop_dynamics(x, nan, p, CplPower(100.0)),
                      std::domain_error);
}

TEST_CASE("guards trip when a voltage reaches its floor") {
    const PlantParams p = default_plant();

    const OpenLoopState dead{1.0, kVoltageFloor};
    REQUIRE_THROWS_AS(open_loop_dynamics(dead, p, CplPower(10.0)),
                      voltage_collapse_error);

    NetworkState x{10.0, kVoltageFloor / 2, 1.0, 30.0};
    REQUIRE_THROWS_AS(vector_fields(x, p, CplPower(10.0)), voltage_collapse_error);
    try {
        vector_fields(x, p, CplPower(10.0));
    } catch (const voltage_collapse_error& e) {
        CHECK(e.voltage == kVoltageFloor / 2);
    }

    // The unchecked evaluation path stays pure arithmetic so that an
    // adaptive integrator can probe sick trial states and reject the step.
    const auto raw = detail::network_fields(x, p, 10.0);
    CHECK(std::isfinite(raw.f[0]));
    CHECK(std::isfinite(raw.f[1])); // x2 is small but nonzero
}

TEST_CASE("unchecked and guarded evaluations agree on healthy states") {
    auto rng = testutil::seeded_rng(2);
    for (int trial = 0; trial < 25; ++trial) {
        const auto pt = testutil::random_admissible(rng);
        const auto eq = assignable_equilibrium(pt.p, CplPower(pt.P), pt.x2bar);
        const NetworkState x = testutil::perturbed(rng, eq.xbar);

        const VectorFields guarded = vector_fields(x, pt.p, CplPower(pt.P));
        const VectorFields raw = detail::network_fields(x, pt.p, pt.P);
        for (int i = 0; i < 4; ++i) {
            CHECK(guarded.f[i] == raw.f[i]);
            CHECK(guarded.g[i] == raw.g[i]);
        }
    }
}

TEST_CASE("stored energy obeys the instantaneous power balance") {
    // d/dt [L1 x1^2 + C1 x2^2 + L2 x3^2 + C2 x4^2]/2
    //   = E x1 - r1 x1^2 - P - r2 x3^2 - x4^2 / r3
    // for every state and duty cycle: the switch itself is lossless, so the
    // gradient of the stored energy along the dynamics must equal source
    // power in minus dissipation minus the constant-power draw.
    auto rng = testutil::seeded_rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pt = testutil::random_admissible(rng);
        const auto eq = assignable_equilibrium(pt.p, CplPower(pt.P), pt.x2bar);
        const NetworkState x = testutil::perturbed(rng, eq.xbar);
        const double u = testutil::uniform(rng, 0.0, 1.0);

        const auto dx = closed_loop_dynamics(x, u, pt.p, CplPower(pt.P));
        const double de = pt.p.L1 * x.x1 * dx[0] + pt.p.C1 * x.x2 * dx[1] +
                          pt.p.L2 * x.x3 * dx[2] + pt.p.C2 * x.x4 * dx[3];
        const double balance = pt.p.E * x.x1 - pt.p.r1 * x.x1 * x.x1 - pt.P -
                               pt.p.r2 * x.x3 * x.x3 - x.x4 * x.x4 / pt.p.r3;

        const double scale = std::abs(pt.p.E * x.x1) + std::abs(pt.p.r1 * x.x1 * x.x1) +
                             pt.P + std::abs(pt.p.r2 * x.x3 * x.x3) +
                             std::abs(x.x4 * x.x4 / pt.p.r3) + 1.0;
        CHECK(std::abs(de - balance) < 1e-9 * scale);
    }
}

TEST_CASE("stored energy is the capacitor/inductor quadratic form") {
    const PlantParams p = default_plant();
    const NetworkState x{2.0, 24.0, 0.5, 100.0};
    const double expected = 0.5 * (p.L1 * 4.0 + p.C1 * 576.0 + p.L2 * 0.25 + p.C2 * 1e4);
    CHECK(stored_energy(x, p) == Catch::Approx(expected).epsilon(1e-15));
}
