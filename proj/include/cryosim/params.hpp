#pragma once

#include <cmath>
#include <numbers>

#include "cryosim/faults.hpp"

namespace cryo {

inline constexpr double kGasConstant = 8.314;         // J/(mol K)
inline constexpr double kHeliumMolarMass = 4.0026e-3;  // kg/mol

/// Face area of a piston of diameter d.
inline constexpr double face_area(double d) {
    return std::numbers::pi * d * d / 4.0;
}

/// Physical constants and closure parameters of the cooler. All SI.
///
/// Calibration parameters (motor_const, reject_ua, piston_area, load_area,
/// matrix_heat_cap) have engineering defaults and are refined by the
/// calibration routine against measured steady-state points.
struct CoolerParams {
    double mass = 1.0;           // piston/cylinder moving mass, kg
    double damping = 0.116;      // N s/m
    double spring = 40000.0;     // N/m
    double motor_const = 32.0;   // N/A, coil length x flux density

    double piston_area = face_area(0.013);  // m^2, compressor face (calibration)
    double comp_length = 0.06;              // m
    double exp_diameter = 0.013;            // m
    double exp_length = 0.082;              // m

    double charge_pressure = 2.0e6;  // Pa
    double ambient = 300.0;          // K
    double drive_freq = 50.0;        // Hz

    double regen_eff = 0.98;         // regenerator effectiveness, (0, 1]
    double film_coeff = 50.481;      // W/(m^2 K), free-convective base-load path
    double load_area = face_area(0.013);  // m^2, cold-tip exposed area (calibration)
    double reject_ua = 0.15;         // W/K, heat-rejection conductance (calibration)
    double matrix_heat_cap = 3.6;    // J/K, regenerator matrix M_r*C_pr (calibration)
    double helium_cp = 5193.0;       // J/(kg K), constant

    double exp_area() const { return face_area(exp_diameter); }
    double comp_volume_rest() const { return piston_area * comp_length; }
    double exp_volume_rest() const { return exp_area() * exp_length; }

    /// Undamped natural frequency sqrt(K/M)/2pi, Hz.
    double natural_freq() const { return std::sqrt(spring / mass) / (2.0 * std::numbers::pi); }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(name) + " must be positive", 0, name);
        };
        positive(mass, "mass");
        positive(damping, "damping");
        positive(spring, "spring");
        positive(motor_const, "motor_const");
        positive(piston_area, "piston_area");
        positive(comp_length, "comp_length");
        positive(exp_diameter, "exp_diameter");
        positive(exp_length, "exp_length");
        positive(charge_pressure, "charge_pressure");
        positive(ambient, "ambient");
        positive(drive_freq, "drive_freq");
        positive(film_coeff, "film_coeff");
        positive(load_area, "load_area");
        positive(reject_ua, "reject_ua");
        positive(matrix_heat_cap, "matrix_heat_cap");
        positive(helium_cp, "helium_cp");
        if (!(regen_eff > 0.0 && regen_eff <= 1.0))
            throw ConfigError("effectiveness must lie in (0,1]", 0, "eps");
    }
};

}  // namespace cryo
