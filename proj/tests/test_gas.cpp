#include <catch2/catch_amalgamated.hpp>

#include "cryosim/gas.hpp"
#include "helpers.hpp"

using namespace cryo;

TEST_CASE("ideal gas pressure matches hand arithmetic") {
    CHECK(ideal_gas_pressure(1.0, 300.0, 1.0) == Catch::Approx(2494.2).margin(0.01));
}

TEST_CASE("pressure is linear in temperature at fixed n, V") {
    const double p1 = ideal_gas_pressure(0.4, 150.0, 2e-5);
    const double p2 = ideal_gas_pressure(0.4, 300.0, 2e-5);
    CHECK(p2 == Catch::Approx(2.0 * p1).epsilon(1e-12));
}

TEST_CASE("default charge inventory of the compression space") {
    const double area = face_area(0.013);
    const double volume = area * 0.06;
    CHECK(volume == Catch::Approx(7.964e-6).epsilon(1e-3));
    const double n = moles_for(2.0e6, volume, 300.0);
    CHECK(n == Catch::Approx(6.384e-3).epsilon(1e-3));
    CHECK(n * kHeliumMolarMass == Catch::Approx(2.555e-5).epsilon(1e-3));
}

TEST_CASE("gas law round trip n <-> P") {
    XorShift64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double n = rng.uniform(1e-4, 1e-1);
        const double t = rng.uniform(20.0, 400.0);
        const double v = rng.uniform(1e-6, 1e-3);
        const double p = ideal_gas_pressure(n, t, v);
        CHECK(moles_for(p, v, t) == Catch::Approx(n).epsilon(1e-12));
    }
}

TEST_CASE("non-positive inputs are domain errors") {
    CHECK_THROWS_AS(ideal_gas_pressure(0.0, 300.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ideal_gas_pressure(1.0, -2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ideal_gas_pressure(1.0, 300.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(moles_for(1e5, 1e-5, 0.0), std::domain_error);
    CHECK_THROWS_AS(work_rate(0.0, 1e-5, 0.0, 0.0), std::domain_error);
}

TEST_CASE("work rate follows P dV/dt + V dP/dt") {
    CHECK(work_rate(2e6, 8e-6, 0.0, 0.0) == 0.0);
    CHECK(work_rate(2e6, 3e-5, -1e-4, 0.0) == Catch::Approx(-200.0));
    CHECK(work_rate(1e5, 1e-5, 0.0, 1e7) == Catch::Approx(100.0));
}

TEST_CASE("charged chamber satisfies the gas law exactly") {
    ChamberGas g = charge_chamber(2.0e6, 7.9e-6, 300.0);
    CHECK(g.gas_law_residual() < 1e-12);
    g.temperature = 150.0;
    requilibrate(g);
    CHECK(g.gas_law_residual() < 1e-12);
    CHECK(g.pressure == Catch::Approx(1.0e6).epsilon(1e-12));
}
