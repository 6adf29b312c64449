#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cryo {

/// One telemetry row, sampled at the scenario's sample period.
struct TracePoint {
    double t = 0.0;            // s
    double cold = 0.0;         // K, T_E
    double hot = 0.0;          // K, T_C
    double setpoint = 0.0;     // K (0 in open loop)
    double filtered_sp = 0.0;  // K
    double current = 0.0;      // A, commanded drive amplitude
    double load = 0.0;         // W, applied Q_ab
    double piston_amp = 0.0;   // m
    double comp_pressure = 0.0;// Pa
};

struct Trace {
    std::vector<TracePoint> points;
    double sample_period = 1.0;  // s, uniform spacing

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Step-response summary over a window of a trace.
struct ResponseMetrics {
    double peak_time = 0.0;       // s from window start to the largest deviation
    double peak_overshoot = 0.0;  // K beyond the target, 0 when never exceeded
    double settling_time = 0.0;   // s from window start until the band holds
    double steady_value = 0.0;    // K, mean of the final 10% of the window
};

/// Computes response metrics over t >= t0.
///
/// The response direction is sign(target - baseline); for a pure disturbance
/// window (baseline == target) the direction of the largest excursion is
/// used. Settling time is measured to the *last* sample outside the band.
/// Throws std::domain_error when the window holds no samples.
inline ResponseMetrics response_metrics(const Trace& tr, double t0, double baseline,
                                        double target, double band) {
    if (!(band > 0.0)) throw std::domain_error("response_metrics: band must be positive");

    std::size_t first = tr.points.size();
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
        if (tr.points[i].t >= t0) { first = i; break; }
    }
    if (first >= tr.points.size())
        throw std::domain_error("response_metrics: empty window");

    const std::size_t n = tr.points.size() - first;

    double dir = target > baseline ? 1.0 : (target < baseline ? -1.0 : 0.0);
    if (dir == 0.0) {
        double extreme = 0.0;
        for (std::size_t i = first; i < tr.points.size(); ++i) {
            const double dev = tr.points[i].cold - target;
            if (std::abs(dev) > std::abs(extreme)) extreme = dev;
        }
        dir = extreme >= 0.0 ? 1.0 : -1.0;
    }

    ResponseMetrics m;
    double peak_dev = -1.0;
    double last_exit = t0;
    for (std::size_t i = first; i < tr.points.size(); ++i) {
        const TracePoint& pt = tr.points[i];
        const double dev_from_baseline = std::abs(pt.cold - baseline);
        if (dev_from_baseline > peak_dev) {
            peak_dev = dev_from_baseline;
            m.peak_time = pt.t - t0;
        }
        const double beyond = dir * (pt.cold - target);
        if (beyond > m.peak_overshoot) m.peak_overshoot = beyond;
        if (std::abs(pt.cold - target) > band) last_exit = pt.t;
    }
    m.settling_time = last_exit - t0;

    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    double sum = 0.0;
    for (std::size_t i = tr.points.size() - tail; i < tr.points.size(); ++i)
        sum += tr.points[i].cold;
    m.steady_value = sum / static_cast<double>(tail);
    return m;
}

}  // namespace cryo
