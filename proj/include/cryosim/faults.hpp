#pragma once

#include <stdexcept>
#include <string>

namespace cryo {

/// Base class for simulation faults raised by the plant or the scenario
/// engine. Everything below carries enough context to report the failure
/// without re-running.
struct SimFault : std::runtime_error {
    explicit SimFault(const std::string& what) : std::runtime_error(what) {}
};

/// Piston displacement exceeded the cylinder length.
struct PistonOvertravel : SimFault {
    double displacement;  // m, offending value
    double velocity;      // m/s at the fault
    double limit;         // m, |x| bound
    double time;          // s, simulation time when known (-1 otherwise)

    PistonOvertravel(double x, double v, double lim, double t = -1.0)
        : SimFault("piston overtravel: |x|=" + std::to_string(x) +
                   " m exceeds cylinder length " + std::to_string(lim) + " m"),
          displacement(x), velocity(v), limit(lim), time(t) {}
};

/// A chamber energy update drove the gas temperature to zero or below.
struct NonphysicalTemperature : SimFault {
    double temperature;  // K, offending value
    double time;         // s (-1 when unknown)

    explicit NonphysicalTemperature(double t_kelvin, double t_sim = -1.0)
        : SimFault("nonphysical gas temperature " + std::to_string(t_kelvin) + " K"),
          temperature(t_kelvin), time(t_sim) {}
};

/// Steady-state search exhausted its cycle budget.
struct ConvergenceFailure : SimFault {
    double last_slope;  // K per cycle at give-up
    long cycles;

    ConvergenceFailure(double slope, long n)
        : SimFault("steady state not reached after " + std::to_string(n) +
                   " cycles (last slope " + std::to_string(slope) + " K/cycle)"),
          last_slope(slope), cycles(n) {}
};

/// Config text failed to parse or violated a parameter invariant.
struct ConfigError : std::runtime_error {
    int line;          // 1-based line number, 0 when not line-specific
    std::string key;   // offending key, may be empty

    ConfigError(const std::string& msg, int line_no = 0, std::string key_name = {})
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                                         : msg),
          line(line_no), key(std::move(key_name)) {}
};

}  // namespace cryo
