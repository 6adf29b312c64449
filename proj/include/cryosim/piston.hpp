#pragma once

#include <cmath>
#include <stdexcept>

#include "cryosim/faults.hpp"
#include "cryosim/params.hpp"

namespace cryo {

struct PistonState {
    double x = 0.0;  // displacement, m (positive compresses the compression space)
    double v = 0.0;  // velocity, m/s
};

/// 0.5 M v^2 + 0.5 K x^2, J.
inline double mechanical_energy(const PistonState& s, const CoolerParams& p) {
    return 0.5 * p.mass * s.v * s.v + 0.5 * p.spring * s.x * s.x;
}

/// Precomputed backward-Euler coefficients for a fixed (params, dt) pair.
struct PistonCoeffs {
    double dt;
    double h_m;        // dt / M
    double denom_inv;  // 1 / (1 + h_m (D + K dt))
    double spring;
    double limit;      // cylinder length

    PistonCoeffs(const CoolerParams& p, double step)
        : dt(step),
          h_m(step / p.mass),
          denom_inv(1.0 / (1.0 + step / p.mass * (p.damping + p.spring * step))),
          spring(p.spring),
          limit(p.comp_length) {}

    PistonState advance(const PistonState& s, double force) const {
        PistonState out;
        out.v = (s.v + h_m * (force - spring * s.x)) * denom_inv;
        out.x = s.x + dt * out.v;
        if (out.x > limit || out.x < -limit)
            throw PistonOvertravel(out.x, out.v, limit);
        return out;
    }
};

/// Advances M x'' + D x' + K x = K_m I - A_c dP by one sub-step.
///
/// Backward-Euler update, closed form for the linear system. The map is
/// unconditionally bounded and strictly dissipative, so unforced mechanical
/// energy never increases; the O((w dt)^2) numerical dissipation also damps
/// the free 31.8 Hz mode that the quarter-gated drive keeps re-exciting,
/// which is what makes the end-of-cycle state settle to a clean periodic
/// orbit. At the 50 Hz forced response the amplitude perturbation is below
/// 0.1%. The forcing term is held constant over the sub-step.
///
/// Throws PistonOvertravel when |x| exceeds the cylinder length.
inline PistonState piston_step(const PistonState& s, double current, double dP,
                               const CoolerParams& p, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("piston_step: dt must be positive");
    // Resolve the oscillator: dt <= 1/(20 f_nat).
    if (dt > 1.0 / (20.0 * p.natural_freq()))
        throw std::invalid_argument("piston_step: dt too coarse for the oscillator");

    const PistonCoeffs coeffs(p, dt);
    return coeffs.advance(s, p.motor_const * current - p.piston_area * dP);
}

}  // namespace cryo
