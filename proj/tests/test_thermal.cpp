#include <catch2/catch_amalgamated.hpp>

#include "cryosim/thermal.hpp"

using namespace cryo;

TEST_CASE("heat rejection closure") {
    CoolerParams p;
    p.reject_ua = 0.5;
    CHECK(heat_rejection(p.ambient, p) == 0.0);
    CHECK(heat_rejection(320.0, p) == Catch::Approx(10.0));
    CHECK(heat_rejection(290.0, p) == Catch::Approx(-5.0));  // inward, not clamped
    CHECK_THROWS_AS(heat_rejection(0.0, p), std::domain_error);
}

TEST_CASE("base load heat leak") {
    CoolerParams p;  // h = 50.481, A_s = pi 0.013^2/4
    CHECK(base_load_heat(p.ambient, p) == 0.0);
    CHECK(base_load_heat(150.0, p) == Catch::Approx(1.005).epsilon(1e-3));
    p.load_area = 1e-300;  // area-free limit
    CHECK(base_load_heat(150.0, p) == Catch::Approx(0.0).margin(1e-290));
    CHECK_THROWS_AS(base_load_heat(-1.0, p), std::domain_error);
}

TEST_CASE("chamber energy update") {
    CHECK(chamber_energy_step(300.0, 2.0, 0.0, 0.0, 0.01) == 300.0);
    CHECK(chamber_energy_step(300.0, 2.0, 10.0, 0.0, 0.01) == Catch::Approx(300.05));
    CHECK(chamber_energy_step(150.0, 2.0, -3.0, 0.5 + 1.0, 0.01) == Catch::Approx(149.9925));
}

TEST_CASE("nonphysical temperature faults") {
    CHECK_THROWS_AS(chamber_energy_step(1.0, 0.1, -100.0, 0.0, 1.0), NonphysicalTemperature);
    CHECK_THROWS_AS(chamber_energy_step(300.0, 0.0, 0.0, 0.0, 0.01), std::domain_error);
    CHECK_THROWS_AS(chamber_energy_step(300.0, 2.0, 0.0, 0.0, 0.0), std::domain_error);
}
