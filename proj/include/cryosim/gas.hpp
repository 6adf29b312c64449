#pragma once

#include <cmath>
#include <stdexcept>

#include "cryosim/params.hpp"

namespace cryo {

/// One gas chamber (compression or expansion space). Closed system: moles
/// stay fixed once charged; pressure is re-derived from the gas law after
/// every temperature or volume update, so P*V = n*R*T holds by construction.
struct ChamberGas {
    double pressure = 0.0;     // Pa
    double volume = 0.0;       // m^3
    double temperature = 0.0;  // K
    double moles = 0.0;        // mol

    double gas_mass() const { return moles * kHeliumMolarMass; }  // kg

    /// M_he * C_phe, J/K — the chamber's thermal capacity.
    double heat_capacity(const CoolerParams& p) const { return gas_mass() * p.helium_cp; }

    /// Relative gas-law residual |PV - nRT| / nRT.
    double gas_law_residual() const {
        const double nrt = moles * kGasConstant * temperature;
        return std::abs(pressure * volume - nrt) / nrt;
    }
};

/// P = n R T / V. Domain error on any non-positive input.
inline double ideal_gas_pressure(double moles, double temperature, double volume) {
    if (!(moles > 0.0) || !(temperature > 0.0) || !(volume > 0.0))
        throw std::domain_error("ideal_gas_pressure: inputs must be positive");
    return moles * kGasConstant * temperature / volume;
}

/// n = P V / (R T). Domain error on any non-positive input.
inline double moles_for(double pressure, double volume, double temperature) {
    if (!(pressure > 0.0) || !(volume > 0.0) || !(temperature > 0.0))
        throw std::domain_error("moles_for: inputs must be positive");
    return pressure * volume / (kGasConstant * temperature);
}

/// Builds a chamber from a charge condition (P, V, T); moles follow the gas law.
inline ChamberGas charge_chamber(double pressure, double volume, double temperature) {
    return ChamberGas{pressure, volume, temperature, moles_for(pressure, volume, temperature)};
}

/// Rate-of-work form P dV/dt + V dP/dt. The sign interpretation (work done
/// on vs by the gas) is the caller's: compression feeds +|W| into the energy
/// balance, expansion -|W|.
inline double work_rate(double pressure, double volume, double dVdt, double dPdt) {
    if (!(pressure > 0.0) || !(volume > 0.0))
        throw std::domain_error("work_rate: pressure and volume must be positive");
    return pressure * dVdt + volume * dPdt;
}

/// Re-derives pressure from the gas law after a T or V change.
inline void requilibrate(ChamberGas& gas) {
    gas.pressure = ideal_gas_pressure(gas.moles, gas.temperature, gas.volume);
}

}  // namespace cryo
