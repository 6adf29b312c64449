#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cryosim/calibrate.hpp"

using namespace cryo;

namespace {

CoolerParams fast_plant() {
    CoolerParams p;
    p.matrix_heat_cap = 0.4;
    return p;
}

}  // namespace

TEST_CASE("identity fit is a fixed point") {
    const CoolerParams p0 = fast_plant();
    const SteadyState st = steady_state(p0, 1.6, 0.0);
    const CalibrationResult r = calibrate(p0, {{1.6, 0.0, st.cold}});
    CHECK(r.residual < 1e-6);
    CHECK(r.params.motor_const == p0.motor_const);
    CHECK(r.params.reject_ua == p0.reject_ua);
    CHECK(r.iterations >= 1);
}

TEST_CASE("single-parameter fit recovers the rejection conductance") {
    // Strong drive so the conductance has a measurable path into the cold tip.
    CoolerParams truth = fast_plant();
    truth.motor_const = 150.0;
    truth.matrix_heat_cap = 0.5;
    truth.reject_ua = 0.75;

    SteadyOptions tight;
    tight.slope_tol = 1e-9;
    tight.max_cycles = 400000;

    const SteadyState target = steady_state(truth, 1.55, 0.0, tight);

    CalibrationOptions opts;
    opts.fit = {FitParam::RejectUa};
    opts.objective_tol = 1e-9;
    opts.stop_step = 1e-7;
    opts.steady = tight;

    CoolerParams start = truth;
    start.reject_ua = 0.5;
    const CalibrationResult r = calibrate(start, {{1.55, 0.0, target.cold}}, opts);
    CHECK(std::abs(r.params.reject_ua - 0.75) / 0.75 < 1e-4);
    // Everything not under fit stays put.
    CHECK(r.params.motor_const == truth.motor_const);
    CHECK(r.params.load_area == truth.load_area);
}

TEST_CASE("calibration needs at least one target") {
    CHECK_THROWS_AS(calibrate(fast_plant(), {}), std::invalid_argument);
}

TEST_CASE("unreachable targets fail carrying the best fit") {
    CalibrationOptions opts;
    opts.max_passes = 3;
    opts.fail_threshold = 0.5;
    try {
        // 10 K at a whisper of drive current is far outside the model's reach.
        calibrate(fast_plant(), {{0.2, 0.0, 10.0}}, opts);
        FAIL("expected CalibrationFailed");
    } catch (const CalibrationFailed& e) {
        CHECK(e.best.residual > 0.5);
        CHECK(e.best.iterations > 0);
        e.best.params.validate();
    }
}
