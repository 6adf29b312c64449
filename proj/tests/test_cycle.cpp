#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cryosim/plant.hpp"

using namespace cryo;

TEST_CASE("ambient equilibrium is a fixed point at zero drive") {
    const CoolerParams p;
    CoolerState s = ambient_state(p);
    for (int i = 0; i < 20; ++i) s = cycle_step(s, 0.0, 0.0, p).state;
    CHECK(std::abs(s.exp.temperature - p.ambient) < 1e-9);
    CHECK(std::abs(s.comp.temperature - p.ambient) < 1e-9);
    CHECK(std::abs(s.piston.x) < 1e-12);
    CHECK(std::abs(s.regen.t_r1 - p.ambient) < 1e-9);
    CHECK(s.time == Catch::Approx(20.0 / p.drive_freq));
}

TEST_CASE("an undriven cold tip warms back toward ambient") {
    const CoolerParams p;
    CoolerState s = ambient_state(p);
    s.exp.temperature = 150.0;
    requilibrate(s.exp);
    s.regen.t_r1 = 150.0;
    // Park the piston at its static equilibrium for the cold-state pressure
    // difference so no switch-off transient stroke remains.
    s.piston.x = -p.piston_area * (s.comp.pressure - s.exp.pressure) / p.spring;
    s.comp.volume = p.piston_area * (p.comp_length - s.piston.x);
    requilibrate(s.comp);
    s.piston.x = -p.piston_area * (s.comp.pressure - s.exp.pressure) / p.spring;
    s.comp.volume = p.piston_area * (p.comp_length - s.piston.x);
    requilibrate(s.comp);
    double prev = s.exp.temperature;
    for (int i = 0; i < 100; ++i) {
        s = cycle_step(s, 0.0, 0.0, p).state;
        REQUIRE(s.exp.temperature > prev);
        prev = s.exp.temperature;
    }
}

TEST_CASE("gas law holds after every cycle") {
    const CoolerParams p;
    CoolerState s = ambient_state(p);
    for (int i = 0; i < 200; ++i) {
        s = cycle_step(s, 1.6, 0.1, p).state;
        REQUIRE(s.comp.gas_law_residual() < 1e-9);
        REQUIRE(s.exp.gas_law_residual() < 1e-9);
    }
}

TEST_CASE("driving the cooler cools the cold tip") {
    const CoolerParams p;
    CoolerState s = ambient_state(p);
    for (int i = 0; i < 500; ++i) s = cycle_step(s, 1.6, 0.0, p).state;
    CHECK(s.exp.temperature < p.ambient - 0.5);
    CHECK(s.comp.temperature > p.ambient);  // compression heat is being shed
}

TEST_CASE("telemetry reports per-cycle energies and piston amplitude") {
    const CoolerParams p;
    CoolerState s = ambient_state(p);
    CycleResult r{};
    for (int i = 0; i < 200; ++i) {
        r = cycle_step(s, 1.6, 0.05, p);
        s = r.state;
    }
    CHECK(r.sample.work_comp > 0.0);
    CHECK(r.sample.work_exp > 0.0);
    CHECK(r.sample.piston_amp > 0.0);
    CHECK(r.sample.piston_amp < p.comp_length);
    CHECK(r.sample.heat_load == Catch::Approx(0.05 / p.drive_freq));
    CHECK(r.sample.heat_base > 0.0);
    CHECK(r.sample.t == Catch::Approx(s.time));
}

TEST_CASE("cycle rejects negative inputs") {
    const CoolerParams p;
    const CoolerState s = ambient_state(p);
    CHECK_THROWS_AS(cycle_step(s, -1.0, 0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(cycle_step(s, 1.0, -0.1, p), std::invalid_argument);
}

TEST_CASE("piston overtravel propagates with the failure time") {
    CoolerParams p;
    p.motor_const = 1e6;
    CoolerState s = ambient_state(p);
    try {
        for (int i = 0; i < 500; ++i) s = cycle_step(s, 2.0, 0.0, p).state;
        FAIL("expected PistonOvertravel");
    } catch (const PistonOvertravel& f) {
        CHECK(f.time >= 0.0);
    }
}
