#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cryo {

/// Discrete PI controller parameters. Gains follow the loop convention
/// error-in-kelvin, output-in-controller-units; the loop's drive stage maps
/// controller units to drive-current amplitude.
struct PIConfig {
    double kp = 7.5;           // proportional gain, 1/K
    double ki = 0.3;           // integral gain, 1/(K s)  (ki = kp / tau_i)
    double ts = 3.6;           // sample period, s
    double u_min = 0.0;        // output saturation, low
    double u_max = 3.0;        // output saturation, high
    bool anti_windup = true;   // conditional integration

    void validate() const {
        if (!(kp >= 0.0) || !(ki >= 0.0)) throw std::invalid_argument("PI gains must be >= 0");
        if (!(ts > 0.0)) throw std::invalid_argument("PI sample period must be positive");
        if (!(u_min < u_max)) throw std::invalid_argument("PI saturation bounds inverted");
    }
};

struct PIState {
    double integ = 0.0;   // accumulated integral term
    double u_last = 0.0;  // last commanded output, within [u_min, u_max]
};

/// First-order recursive set-point filter y[n] = a y[n-1] + (1-a) x[n].
struct FilterConfig {
    double a = 0.98;  // recursive coefficient, 0 <= a < 1

    void validate() const {
        if (!(a >= 0.0 && a < 1.0))
            throw std::invalid_argument("filter coefficient must lie in [0,1)");
    }
};

struct FilterState {
    double y_prev = 0.0;
    bool initialized = false;
};

enum class LoopMode { OneDof, TwoDof };

/// Loop structure: plain feedback PI or set-point-filter two-degree-of-
/// freedom PI. drive_gain converts controller
/// output units to amperes of drive amplitude; the saturation bounds in
/// PIConfig are expressed in amperes and are honoured after the mapping.
/// sensor_lag is the first-order time constant of the cold-tip temperature
/// sensor feeding the loop (the diode sits on a flange with its own thermal
/// mass); zero disables it.
struct LoopConfig {
    LoopMode mode = LoopMode::OneDof;
    PIConfig pi;
    FilterConfig filter;       // ignored in OneDof
    double drive_gain = 0.16;  // A per controller unit
    double sensor_lag = 12.0;  // s

    void validate() const {
        pi.validate();
        filter.validate();
        if (!(drive_gain > 0.0)) throw std::invalid_argument("drive gain must be positive");
        if (!(sensor_lag >= 0.0)) throw std::invalid_argument("sensor lag must be >= 0");
    }
};

struct LoopState {
    PIState pi;
    FilterState filter;
};

struct FilterResult {
    FilterState state;
    double y = 0.0;
};

/// One filter update. An uninitialized filter seeds to its first input
/// (bumpless start) and passes it through unchanged.
inline FilterResult filter_step(const FilterState& fs, const FilterConfig& cfg, double x) {
    FilterResult r;
    if (!fs.initialized) {
        r.y = x;
    } else {
        r.y = cfg.a * fs.y_prev + (1.0 - cfg.a) * x;
    }
    r.state.y_prev = r.y;
    r.state.initialized = true;
    return r;
}

/// Continuous time constant whose zero-order-hold discretization at period
/// Ts gives coefficient a: tau_f = -Ts / ln(a). a = 0 degenerates to 0.
inline double filter_time_constant(double a, double ts) {
    if (!(ts > 0.0)) throw std::domain_error("filter_time_constant: Ts must be positive");
    if (a == 0.0) return 0.0;
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("filter_time_constant: a must lie in [0,1)");
    return -ts / std::log(a);
}

struct PIResult {
    PIState state;
    double u = 0.0;
};

/// Positional PI with forward-Euler integral and conditional anti-windup:
/// the integral increment is discarded whenever the output saturates in the
/// error's own direction.
inline PIResult pi_step(const PIState& ps, const PIConfig& cfg, double e) {
    const double integ_next = ps.integ + cfg.ki * cfg.ts * e;
    const double u_raw = cfg.kp * e + integ_next;

    PIResult r;
    if (u_raw > cfg.u_max) {
        r.u = cfg.u_max;
        r.state.integ = (cfg.anti_windup && e > 0.0) ? ps.integ : integ_next;
    } else if (u_raw < cfg.u_min) {
        r.u = cfg.u_min;
        r.state.integ = (cfg.anti_windup && e < 0.0) ? ps.integ : integ_next;
    } else {
        r.u = u_raw;
        r.state.integ = integ_next;
    }
    r.state.u_last = r.u;
    return r;
}

struct ControlOutput {
    LoopState state;
    double current = 0.0;      // A, drive-current amplitude command
    double filtered_sp = 0.0;  // K, for telemetry (equals sp in OneDof)
};

/// One controller execution. Internally the error is e = pv - sp_f so a
/// cold tip that is too warm raises the commanded current (more cooling);
/// TwoDof first shapes the set-point through the recursive filter.
inline ControlOutput control_step(const LoopState& ls, const LoopConfig& cfg, double sp,
                                  double pv) {
    ControlOutput out;
    out.state = ls;

    double sp_eff = sp;
    if (cfg.mode == LoopMode::TwoDof) {
        const FilterResult fr = filter_step(ls.filter, cfg.filter, sp);
        out.state.filter = fr.state;
        sp_eff = fr.y;
    }
    out.filtered_sp = sp_eff;

    const double e = pv - sp_eff;

    // The PI works in controller units; saturation bounds are specified in
    // amperes, so they are mapped through the drive gain and back.
    PIConfig pi_units = cfg.pi;
    pi_units.u_min = cfg.pi.u_min / cfg.drive_gain;
    pi_units.u_max = cfg.pi.u_max / cfg.drive_gain;
    const PIResult pr = pi_step(ls.pi, pi_units, e);
    out.state.pi = pr.state;
    out.current = std::clamp(pr.u * cfg.drive_gain, cfg.pi.u_min, cfg.pi.u_max);
    return out;
}

}  // namespace cryo
