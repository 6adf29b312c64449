#pragma once

#include <cmath>
#include <optional>

#include "cryosim/control.hpp"
#include "cryosim/faults.hpp"
#include "cryosim/plant.hpp"
#include "cryosim/scenario.hpp"
#include "cryosim/trace.hpp"

namespace cryo {

namespace detail {

inline long cycles_per(double seconds, double drive_freq) {
    const long n = std::lround(seconds * drive_freq);
    return n > 0 ? n : 1;
}

}  // namespace detail

/// Open-loop run: the drive amplitude follows the scenario's current
/// profile, no controller in the loop. Deterministic; plant faults carry the
/// failure time.
inline Trace run_open_loop(const CoolerParams& p, const Scenario& sc) {
    p.validate();
    sc.validate();
    if (sc.current.empty())
        throw std::invalid_argument("run_open_loop: scenario has no current profile");
    if (!sc.setpoint.empty())
        throw std::invalid_argument("run_open_loop: set-point profile is a closed-loop input");

    CoolerState s = sc.initial_state ? *sc.initial_state : ambient_state(p);
    const double t_origin = s.time;

    Trace tr;
    tr.sample_period = sc.sample_period;
    const long total = detail::cycles_per(sc.duration, p.drive_freq);
    const long stride = detail::cycles_per(sc.sample_period, p.drive_freq);
    tr.points.reserve(static_cast<std::size_t>(total / stride + 1));

    for (long k = 0; k < total; ++k) {
        const double t_rel = s.time - t_origin;
        const double amp = sc.current.value_at(t_rel);
        const double load = sc.load_at(t_rel);
        CycleResult r = cycle_step(s, amp, load, p);
        s = r.state;
        if ((k + 1) % stride == 0) {
            tr.points.push_back({r.sample.t - t_origin, r.sample.cold_temp, r.sample.hot_temp,
                                 0.0, 0.0, amp, load, r.sample.piston_amp,
                                 r.sample.comp_pressure});
        }
    }
    return tr;
}

/// Closed-loop run: plant at the drive frequency, controller every Ts with
/// zero-order hold on the commanded amplitude. The measured variable is the
/// end-of-cycle T_E nearest the controller tick.
inline Trace run_closed_loop(const CoolerParams& p, const LoopConfig& loop, const Scenario& sc) {
    p.validate();
    loop.validate();
    sc.validate();
    if (sc.setpoint.empty())
        throw std::invalid_argument("run_closed_loop: scenario has no set-point profile");
    if (!sc.current.empty())
        throw std::invalid_argument("run_closed_loop: current profile is an open-loop input");

    CoolerState s = sc.initial_state ? *sc.initial_state : ambient_state(p);
    const double t_origin = s.time;

    Trace tr;
    tr.sample_period = sc.sample_period;
    const long total = detail::cycles_per(sc.duration, p.drive_freq);
    const long stride = detail::cycles_per(sc.sample_period, p.drive_freq);
    const long ctrl_stride = detail::cycles_per(loop.pi.ts, p.drive_freq);
    tr.points.reserve(static_cast<std::size_t>(total / stride + 1));

    LoopState ls;
    double u = 0.0;         // A, held between controller executions
    double sp_now = 0.0;
    double filtered_sp = 0.0;

    // Sensor model: first-order lag on the measured cold-tip temperature,
    // advanced once per drive cycle.
    double pv = s.exp.temperature;
    const double sensor_alpha =
        loop.sensor_lag > 0.0 ? 1.0 - std::exp(-1.0 / (p.drive_freq * loop.sensor_lag)) : 1.0;

    for (long k = 0; k < total; ++k) {
        const double t_rel = s.time - t_origin;
        sp_now = sc.setpoint.value_at(t_rel);
        if (k % ctrl_stride == 0) {
            const ControlOutput co = control_step(ls, loop, sp_now, pv);
            ls = co.state;
            u = co.current;
            filtered_sp = co.filtered_sp;
        }
        const double load = sc.load_at(t_rel);
        CycleResult r = cycle_step(s, u, load, p);
        s = r.state;
        pv += sensor_alpha * (s.exp.temperature - pv);
        if ((k + 1) % stride == 0) {
            // Closed-loop telemetry reports the sensed cold-tip temperature:
            // it is the flange temperature the diode reads, the variable the
            // loop actually regulates and the one the experiments plot.
            tr.points.push_back({r.sample.t - t_origin, pv, r.sample.hot_temp,
                                 sp_now, filtered_sp, u, load, r.sample.piston_amp,
                                 r.sample.comp_pressure});
        }
    }
    return tr;
}

struct SteadyOptions {
    double slope_tol = 1e-6;  // K per cycle
    int hold_cycles = 100;    // consecutive cycles under the tolerance
    long max_cycles = 600000; // budget before ConvergenceFailure
};

struct SteadyState {
    double cold = 0.0;  // K, converged T_E
    double hot = 0.0;   // K, converged T_C
    long cycles = 0;    // cycles run to convergence
};

/// Runs from ambient until the per-cycle cold-tip slope stays within
/// tolerance for the hold count; returns the full converged state. Throws
/// ConvergenceFailure past the budget.
inline std::pair<CoolerState, long> run_to_steady(const CoolerParams& p, double current_amp,
                                                  double q_dot_load,
                                                  const SteadyOptions& opts = {}) {
    p.validate();
    if (!(current_amp >= 0.0)) throw std::invalid_argument("steady_state: current must be >= 0");

    CoolerState s = ambient_state(p);
    double prev = s.exp.temperature;
    double slope = 0.0;
    int held = 0;
    for (long k = 1; k <= opts.max_cycles; ++k) {
        s = cycle_step(s, current_amp, q_dot_load, p).state;
        slope = s.exp.temperature - prev;
        prev = s.exp.temperature;
        held = std::abs(slope) < opts.slope_tol ? held + 1 : 0;
        if (held >= opts.hold_cycles) return {s, k};
    }
    throw ConvergenceFailure(slope, opts.max_cycles);
}

/// Converged operating point at a given drive amplitude and applied load.
inline SteadyState steady_state(const CoolerParams& p, double current_amp, double q_dot_load,
                                const SteadyOptions& opts = {}) {
    const auto [s, cycles] = run_to_steady(p, current_amp, q_dot_load, opts);
    return {s.exp.temperature, s.comp.temperature, cycles};
}

inline constexpr double kDefaultCoilResistance = 3.635;  // ohm

struct CooldownResult {
    Trace trace;
    double cooldown_time = 0.0;  // s to reach within 1 K of the final value
    double final_cold = 0.0;     // K
    double current = 0.0;        // A mapped from the input power
};

/// Start-up cool-down at a given electrical input power. The power maps to a
/// drive amplitude through P = I^2 R / 2; the run continues from ambient
/// until the steady-state detector fires.
inline CooldownResult cooldown(const CoolerParams& p, double input_power,
                               double coil_resistance = kDefaultCoilResistance,
                               const SteadyOptions& opts = {}, double sample_period = 1.0) {
    p.validate();
    if (!(input_power >= 0.0))
        throw std::invalid_argument("cooldown: input power must be >= 0");
    if (!(coil_resistance > 0.0))
        throw std::invalid_argument("cooldown: coil resistance must be positive");

    CooldownResult res;
    res.current = std::sqrt(2.0 * input_power / coil_resistance);

    CoolerState s = ambient_state(p);
    res.trace.sample_period = sample_period;
    const long stride = detail::cycles_per(sample_period, p.drive_freq);

    double prev = s.exp.temperature;
    int held = 0;
    double slope = 0.0;
    long k = 0;
    for (k = 1; k <= opts.max_cycles; ++k) {
        CycleResult r = cycle_step(s, res.current, 0.0, p);
        s = r.state;
        slope = s.exp.temperature - prev;
        prev = s.exp.temperature;
        if (k % stride == 0) {
            res.trace.points.push_back({r.sample.t, r.sample.cold_temp, r.sample.hot_temp, 0.0,
                                        0.0, res.current, 0.0, r.sample.piston_amp,
                                        r.sample.comp_pressure});
        }
        held = std::abs(slope) < opts.slope_tol ? held + 1 : 0;
        if (held >= opts.hold_cycles) break;
    }
    if (k > opts.max_cycles) throw ConvergenceFailure(slope, opts.max_cycles);

    res.final_cold = s.exp.temperature;
    double last_outside = 0.0;
    for (const TracePoint& pt : res.trace.points)
        if (std::abs(pt.cold - res.final_cold) > 1.0) last_outside = pt.t;
    res.cooldown_time = last_outside;
    return res;
}

}  // namespace cryo
