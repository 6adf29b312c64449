#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cryosim/faults.hpp"
#include "cryosim/params.hpp"
#include "cryosim/sim.hpp"

namespace cryo {

/// One steady-state calibration target: drive the cooler at (current, load)
/// and expect the cold tip at cold_target.
struct CalibrationTarget {
    double current = 0.0;      // A
    double load = 0.0;         // W
    double cold_target = 0.0;  // K
};

/// Closure parameters eligible for fitting.
enum class FitParam { MotorConst, RejectUa, LoadArea, MatrixHeatCap, PistonArea };

inline double& param_ref(CoolerParams& p, FitParam which) {
    switch (which) {
        case FitParam::MotorConst: return p.motor_const;
        case FitParam::RejectUa: return p.reject_ua;
        case FitParam::LoadArea: return p.load_area;
        case FitParam::MatrixHeatCap: return p.matrix_heat_cap;
        case FitParam::PistonArea: return p.piston_area;
    }
    throw std::logic_error("param_ref: unreachable");
}

inline const char* param_name(FitParam which) {
    switch (which) {
        case FitParam::MotorConst: return "motor_const";
        case FitParam::RejectUa: return "reject_ua";
        case FitParam::LoadArea: return "load_area";
        case FitParam::MatrixHeatCap: return "matrix_heat_cap";
        case FitParam::PistonArea: return "piston_area";
    }
    return "?";
}

struct CalibrationOptions {
    std::vector<FitParam> fit;      // empty: auto rule (see calibrate)
    double init_step = 0.05;        // relative coordinate step
    double stop_step = 1e-5;        // stop when every step shrinks below this
    double objective_tol = 2e-4;    // K RMS, early-out
    int max_passes = 60;            // full coordinate sweeps
    double fail_threshold = 2.0;    // K RMS; above this the fit is a failure
    SteadyOptions steady;           // forwarded to steady_state
};

struct CalibrationResult {
    CoolerParams params;
    double residual = 0.0;  // K, RMS over targets
    long iterations = 0;    // objective evaluations
};

/// Calibration did not reach the residual threshold; carries the best fit.
struct CalibrationFailed : SimFault {
    CalibrationResult best;

    explicit CalibrationFailed(CalibrationResult r)
        : SimFault("calibration failed: residual " + std::to_string(r.residual) +
                   " K after " + std::to_string(r.iterations) + " evaluations"),
          best(std::move(r)) {}
};

/// Derivative-free coordinate descent with multiplicative steps (parameters
/// stay positive by construction) minimizing the RMS cold-tip error over the
/// targets. Deterministic: fixed sweep order and step schedule.
///
/// With fewer targets than the five eligible parameters, only motor_const
/// and reject_ua are fitted; the rest stay at their incoming values.
inline CalibrationResult calibrate(const CoolerParams& p0, const std::vector<CalibrationTarget>& targets,
                                   const CalibrationOptions& opts = {}) {
    p0.validate();
    if (targets.empty()) throw std::invalid_argument("calibrate: at least one target");

    std::vector<FitParam> fit = opts.fit;
    if (fit.empty()) {
        if (targets.size() < 5) {
            fit = {FitParam::MotorConst, FitParam::RejectUa};
        } else {
            fit = {FitParam::MotorConst, FitParam::RejectUa, FitParam::LoadArea,
                   FitParam::MatrixHeatCap, FitParam::PistonArea};
        }
    }

    long evals = 0;
    // Trials that fault (piston overtravel, non-convergence) score as
    // infinitely bad instead of aborting the search.
    auto objective = [&](const CoolerParams& p) {
        ++evals;
        double ss = 0.0;
        try {
            for (const CalibrationTarget& t : targets) {
                const SteadyState st = steady_state(p, t.current, t.load, opts.steady);
                const double err = st.cold - t.cold_target;
                ss += err * err;
            }
        } catch (const SimFault&) {
            return std::numeric_limits<double>::infinity();
        }
        return std::sqrt(ss / static_cast<double>(targets.size()));
    };

    CoolerParams best = p0;
    double best_obj = objective(best);
    std::vector<double> step(fit.size(), opts.init_step);

    for (int pass = 0; pass < opts.max_passes && best_obj > opts.objective_tol; ++pass) {
        bool any_live = false;
        for (std::size_t i = 0; i < fit.size(); ++i) {
            if (step[i] < opts.stop_step) continue;
            any_live = true;

            // One directional probe per side; on success, march with doubling
            // steps while the objective keeps improving.
            bool moved = false;
            for (double dir : {+1.0, -1.0}) {
                double s = step[i];
                for (;;) {
                    CoolerParams trial = best;
                    param_ref(trial, fit[i]) *= (1.0 + dir * s);
                    if (!(param_ref(trial, fit[i]) > 0.0)) break;
                    const double obj = objective(trial);
                    if (obj >= best_obj) break;
                    best = trial;
                    best_obj = obj;
                    moved = true;
                    if (best_obj <= opts.objective_tol) break;
                    s = std::min(2.0 * s, 0.5);
                }
                if (moved) break;  // keep the sweep deterministic and cheap
            }
            step[i] = moved ? std::min(2.0 * step[i], 0.5) : step[i] * 0.5;
            if (best_obj <= opts.objective_tol) break;
        }
        if (!any_live) break;
    }

    CalibrationResult res{best, best_obj, evals};
    if (best_obj > opts.fail_threshold) throw CalibrationFailed(res);
    return res;
}

}  // namespace cryo
