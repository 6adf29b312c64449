#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cryosim/plant.hpp"

namespace cryo {

/// Piecewise-constant profile: value_at(t) is the value of the last point
/// with time <= t; before the first point the first value holds.
struct StepProfile {
    std::vector<std::pair<double, double>> points;  // (t, value), strictly increasing t

    bool empty() const { return points.empty(); }

    void validate() const {
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i].first > points[i - 1].first))
                throw std::invalid_argument("profile times must be strictly increasing");
    }

    double value_at(double t) const {
        if (points.empty()) throw std::logic_error("value_at on empty profile");
        double v = points.front().second;
        for (const auto& [pt, pv] : points) {
            if (pt <= t) v = pv;
            else break;
        }
        return v;
    }
};

/// A simulation scenario. Exactly one of setpoint/current is active per run
/// mode: open-loop runs require a current profile, closed-loop runs a
/// set-point profile. The load profile defaults to zero applied load.
struct Scenario {
    double duration = 600.0;       // s
    double sample_period = 1.0;    // s
    StepProfile setpoint;          // K vs t (closed loop)
    StepProfile load;              // W vs t (applied Q_ab)
    StepProfile current;           // A vs t (open loop)
    std::optional<CoolerState> initial_state;  // ambient start when absent

    double load_at(double t) const { return load.empty() ? 0.0 : load.value_at(t); }

    void validate() const {
        if (!(duration > 0.0)) throw std::invalid_argument("scenario duration must be positive");
        if (!(sample_period > 0.0))
            throw std::invalid_argument("scenario sample period must be positive");
        setpoint.validate();
        load.validate();
        current.validate();
    }
};

}  // namespace cryo
