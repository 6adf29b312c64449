#pragma once

#include <stdexcept>

#include "cryosim/faults.hpp"
#include "cryosim/params.hpp"

namespace cryo {

/// Heat-rejection closure: UA_rej * (T_C - T_ab), W. Negative when the
/// compression space runs below ambient (no clamping).
inline double heat_rejection(double t_c, const CoolerParams& p) {
    if (!(t_c > 0.0)) throw std::domain_error("heat_rejection: T_C must be positive");
    return p.reject_ua * (t_c - p.ambient);
}

/// Base-load leak into the cold tip: h * A_s * (T_ab - T_E), W. Positive
/// while the cold tip sits below ambient.
inline double base_load_heat(double t_e, const CoolerParams& p) {
    if (!(t_e > 0.0)) throw std::domain_error("base_load_heat: T_E must be positive");
    return p.film_coeff * p.load_area * (p.ambient - t_e);
}

/// First-law temperature update: T += (Wdot + Qdot_net) * dt / C.
/// Compression passes +|Wdot| and -Qdot_rej; expansion passes -|Wdot| and
/// +Qdot_ab + Qdot_bl. Faults when the result is nonphysical.
inline double chamber_energy_step(double temperature, double gas_heat_cap, double w_dot,
                                  double q_dot_net, double dt) {
    if (!(gas_heat_cap > 0.0))
        throw std::domain_error("chamber_energy_step: heat capacity must be positive");
    if (!(dt > 0.0)) throw std::domain_error("chamber_energy_step: dt must be positive");
    const double out = temperature + (w_dot + q_dot_net) * dt / gas_heat_cap;
    if (!(out > 0.0)) throw NonphysicalTemperature(out);
    return out;
}

}  // namespace cryo
