#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cryosim/faults.hpp"
#include "cryosim/gas.hpp"
#include "cryosim/params.hpp"
#include "cryosim/piston.hpp"
#include "cryosim/regen.hpp"
#include "cryosim/thermal.hpp"

namespace cryo {

/// Piston/gas sub-steps per quarter-process (four quarters per drive period).
inline constexpr int kSubstepsPerQuarter = 50;

/// Full cooler state. comp.temperature is T_C, exp.temperature is T_E; the
/// regenerator's t_r1 rides the cold end of the span, t_r2 the hot end.
struct CoolerState {
    PistonState piston;
    ChamberGas comp;
    ChamberGas exp;
    RegenState regen;
    double time = 0.0;  // s
};

/// Per-cycle telemetry. Heats and works are energies over the cycle, J.
struct TelemetrySample {
    double t = 0.0;             // s, end of cycle
    double cold_temp = 0.0;     // K, T_E at end of cycle
    double hot_temp = 0.0;      // K, T_C at end of cycle
    double comp_pressure = 0.0; // Pa at end of cycle
    double piston_amp = 0.0;    // m, (max-min)/2 over the cycle
    double work_comp = 0.0;     // J, net work done on the compression gas (1-2)
    double work_exp = 0.0;      // J, net work extracted from the expansion gas (3-4)
    double heat_rejected = 0.0; // J, via the UA_rej path
    double heat_load = 0.0;     // J, applied cooling load Q_ab
    double heat_base = 0.0;     // J, base-load leak Q_bl
    double regen_stored = 0.0;  // J, Q_c into the matrix (2-3)
    double regen_returned = 0.0;// J, Q'_c out of the matrix (4-1)
};

struct CycleResult {
    CoolerState state;
    TelemetrySample sample;
};

/// Cooler charged at rest: both chambers at the charge pressure and ambient
/// temperature, piston centred, matrix at ambient. This is an exact fixed
/// point of cycle_step at zero drive current and zero applied load.
inline CoolerState ambient_state(const CoolerParams& p) {
    CoolerState s;
    s.piston = {0.0, 0.0};
    s.comp = charge_chamber(p.charge_pressure, p.comp_volume_rest(), p.ambient);
    s.exp = charge_chamber(p.charge_pressure, p.exp_volume_rest(), p.ambient);
    s.regen = {p.ambient, p.ambient};
    s.time = 0.0;
    return s;
}

/// Advances exactly one drive period 1/f by sequencing the four Stirling
/// processes, one per quarter:
///
///   1-2  compression: motor current (positive sine lobe) drives the piston
///        in; compression work heats T_C; rejection path runs.
///   2-3  constant volume: one e-NTU exchange stores the compression excess
///        in the hot end of the matrix.
///   3-4  expansion: the negative sine lobe pulls the piston back; the
///        expansion space tracks the withdrawal and the gas does work,
///        cooling T_E against the applied load and base leak.
///   4-1  constant volume: one e-NTU exchange pulls the expansion deficit
///        out of the cold end of the matrix, then the displaced volume
///        returns for the next cycle.
///
/// Heat-leak paths (rejection on the hot side, applied load and base load on
/// the cold side) integrate through all four quarters. Work terms follow the
/// caller-side sign convention: the energy balance receives -P dV/dt, i.e.
/// +|W| while compressing and -|W| while expanding.
inline CycleResult cycle_step(const CoolerState& start, double current_amp, double q_dot_load,
                              const CoolerParams& p) {
    if (!(current_amp >= 0.0)) throw std::invalid_argument("cycle_step: current must be >= 0");
    if (!(q_dot_load >= 0.0)) throw std::invalid_argument("cycle_step: load must be >= 0");

    const double period = 1.0 / p.drive_freq;
    const double dt = period / (4.0 * kSubstepsPerQuarter);

    // Mid-substep values of sin(2 pi f t) over one period; the phase grid is
    // the same every cycle.
    static const std::array<double, 4 * kSubstepsPerQuarter> kSine = [] {
        std::array<double, 4 * kSubstepsPerQuarter> tab{};
        for (std::size_t k = 0; k < tab.size(); ++k)
            tab[k] = std::sin(2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                              static_cast<double>(tab.size()));
        return tab;
    }();

    CoolerState s = start;
    TelemetrySample tm;
    const double cap_comp = s.comp.heat_capacity(p);
    const double cap_exp = s.exp.heat_capacity(p);
    const double exp_volume_rest = s.exp.volume;
    const PistonCoeffs coeffs(p, dt);

    double x_min = s.piston.x, x_max = s.piston.x;
    double t_local = 0.0;

    try {
        for (int quarter = 0; quarter < 4; ++quarter) {
            const bool driven = (quarter == 0 || quarter == 2);       // 1-2 and 3-4
            const double x_quarter_start = s.piston.x;

            for (int k = 0; k < kSubstepsPerQuarter; ++k) {
                // Drive polarity: at 50 Hz the piston runs above its 31.8 Hz
                // resonance, so displacement answers the coil force in
                // anti-phase. The winding sign is chosen so the positive sine
                // lobe compresses during 1-2 and the negative lobe withdraws
                // during 3-4.
                const double current =
                    driven ? -current_amp * kSine[quarter * kSubstepsPerQuarter + k] : 0.0;

                const double dp = s.comp.pressure - s.exp.pressure;
                s.piston = coeffs.advance(s.piston, p.motor_const * current - p.piston_area * dp);
                x_min = std::min(x_min, s.piston.x);
                x_max = std::max(x_max, s.piston.x);

                // Compression side.
                const double v_comp_new = p.piston_area * (p.comp_length - s.piston.x);
                const double q_rej = heat_rejection(s.comp.temperature, p);
                double w_on_comp = 0.0;
                if (quarter == 0) {
                    const double w_signed = work_rate(s.comp.pressure, s.comp.volume,
                                                      (v_comp_new - s.comp.volume) / dt, 0.0);
                    w_on_comp = -w_signed;  // work done on the gas
                    tm.work_comp += w_on_comp * dt;
                }
                s.comp.temperature =
                    chamber_energy_step(s.comp.temperature, cap_comp, w_on_comp, -q_rej, dt);
                s.comp.volume = v_comp_new;
                requilibrate(s.comp);
                tm.heat_rejected += q_rej * dt;

                // Expansion side.
                const double q_base = base_load_heat(s.exp.temperature, p);
                double w_by_exp = 0.0;
                if (quarter == 2) {
                    const double v_exp_new =
                        exp_volume_rest + p.exp_area() * std::max(0.0, x_quarter_start - s.piston.x);
                    const double w_signed = work_rate(s.exp.pressure, s.exp.volume,
                                                      (v_exp_new - s.exp.volume) / dt, 0.0);
                    w_by_exp = w_signed;  // >= 0 while the space expands
                    tm.work_exp += w_by_exp * dt;
                    s.exp.volume = v_exp_new;
                }
                s.exp.temperature = chamber_energy_step(s.exp.temperature, cap_exp, -w_by_exp,
                                                        q_dot_load + q_base, dt);
                requilibrate(s.exp);
                tm.heat_load += q_dot_load * dt;
                tm.heat_base += q_base * dt;
            }
            t_local += kSubstepsPerQuarter * dt;

            if (quarter == 1) {
                // Process 2-3: exchange against the hot end of the matrix.
                RegenState hot_view{s.regen.t_r2, s.regen.t_r2};
                const RegenExchange ex = regen_cool(s.comp.temperature, hot_view, cap_comp, p);
                s.regen.t_r2 = ex.state.t_r2;
                s.comp.temperature = ex.outlet_temp;
                requilibrate(s.comp);
                tm.regen_stored = ex.heat;
            } else if (quarter == 3) {
                // Process 4-1: exchange against the cold end of the matrix.
                RegenState cold_view{s.regen.t_r1, s.regen.t_r1};
                const RegenExchange ex = regen_return(s.exp.temperature, cold_view, cap_exp, p);
                s.regen.t_r1 = ex.state.t_r1;
                s.exp.temperature = ex.outlet_temp;
                // Displacer returns: the swept cold volume closes at constant
                // temperature, the flow work having been booked by the exchange.
                s.exp.volume = exp_volume_rest;
                requilibrate(s.exp);
                tm.regen_returned = ex.heat;
            }
        }
    } catch (PistonOvertravel& f) {
        f.time = s.time + t_local;
        throw;
    } catch (NonphysicalTemperature& f) {
        f.time = s.time + t_local;
        throw;
    }

    s.time = start.time + period;
    tm.t = s.time;
    tm.cold_temp = s.exp.temperature;
    tm.hot_temp = s.comp.temperature;
    tm.comp_pressure = s.comp.pressure;
    tm.piston_amp = (x_max - x_min) / 2.0;
    return {s, tm};
}

}  // namespace cryo
