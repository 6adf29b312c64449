#pragma once

#include <algorithm>

#include "cryosim/params.hpp"

namespace cryo {

/// Regenerator matrix temperatures. t_r1 is the matrix temperature before
/// the cold-ward exchange, t_r2 the temperature after it; within the cycle
/// model t_r1 rides near the cold end of the span and t_r2 near the hot end.
/// Only positivity is an invariant; ordering may break during transients.
struct RegenState {
    double t_r1 = 0.0;  // K
    double t_r2 = 0.0;  // K
};

/// Result of one regenerator exchange.
struct RegenExchange {
    double heat = 0.0;        // J moved between gas and matrix this process
    RegenState state;         // updated matrix temperatures
    double outlet_temp = 0.0; // K, gas temperature leaving the matrix
};

/// Process 2-3: gas at T_C gives heat to the matrix (e-NTU, single blow).
///
///   Q_c   = eps * C_min * (T_C - T_R1),  C_min = min(gas, matrix) capacity
///   T_R2' = T_R1 + Q_c / (M_r C_pr)      (matrix warms while storing)
///   T_out = T_C - Q_c / gas_heat_cap
///
/// Q_c may be negative when the matrix is warmer than the gas; reverse
/// transfer is physical in transients and is never clamped.
inline RegenExchange regen_cool(double t_c, const RegenState& regen, double gas_heat_cap,
                                const CoolerParams& p) {
    const double c_min = std::min(gas_heat_cap, p.matrix_heat_cap);
    RegenExchange ex;
    ex.heat = p.regen_eff * c_min * (t_c - regen.t_r1);
    ex.state.t_r1 = regen.t_r1;
    ex.state.t_r2 = regen.t_r1 + ex.heat / p.matrix_heat_cap;
    ex.outlet_temp = t_c - ex.heat / gas_heat_cap;
    return ex;
}

/// Process 4-1: the matrix returns heat to gas at T_E (mirror of regen_cool).
///
///   Q'_c  = eps * C_min * (T_R2 - T_E)
///   T_R1' = T_R2 - Q'_c / (M_r C_pr)     (matrix cools while releasing)
///   T_out = T_E + Q'_c / gas_heat_cap
inline RegenExchange regen_return(double t_e, const RegenState& regen, double gas_heat_cap,
                                  const CoolerParams& p) {
    const double c_min = std::min(gas_heat_cap, p.matrix_heat_cap);
    RegenExchange ex;
    ex.heat = p.regen_eff * c_min * (regen.t_r2 - t_e);
    ex.state.t_r2 = regen.t_r2;
    ex.state.t_r1 = regen.t_r2 - ex.heat / p.matrix_heat_cap;
    ex.outlet_temp = t_e + ex.heat / gas_heat_cap;
    return ex;
}

}  // namespace cryo
