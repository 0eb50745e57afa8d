#pragma once
// Immersion-and-invariance load estimator. The measured signals are the bus
// voltage and the two currents meeting at the bus node; the unknown is the
// CPL power. One integrator state P_I plus the algebraic output
// P_hat = P_I - (k3 C1 / 2) v1^2 give the exact error law
// d(P_hat - P)/dt = -k3 (P_hat - P) along any trajectory of the network,
// so the estimate converges at rate k3 regardless of what the loop does.

#include <algorithm>
#include <stdexcept>

#include "params.hpp"

namespace cpldamp {

struct EstimatorConfig {
    double k3 = 1000.0; // convergence rate [1/s]
    double Phat0 = 0.0; // estimate at t = 0 [W]
    // When set, the value handed to the controller is floored at zero; the
    // published estimate itself is never altered.
    bool clamp_estimate = false;

    void validate() const {
        if (!(k3 > 0.0))
            throw std::domain_error("estimator rate k3 must be positive");
    }
};

// Integrator initial condition that makes the initial estimate equal Phat0.
inline double estimator_init(double v1_0, const EstimatorConfig& c,
                             const PlantParams& p) {
    c.validate();
    p.validate();
    return c.Phat0 + 0.5 * c.k3 * p.C1 * v1_0 * v1_0;
}

// Algebraic output: the integrator minus the capacitor-energy offset.
inline double estimate_power(double P_I, double v1, const EstimatorConfig& c,
                             const PlantParams& p) {
    return P_I - 0.5 * c.k3 * p.C1 * v1 * v1;
}

// Integrator dynamics. i1 is the feeder current, i2 the current leaving the
// bus into the shunt branch (zero when no damper is attached). The true
// load power never appears: it enters only through the measured v1 motion.
inline double estimator_derivative(double P_I, double v1, double i1, double i2,
                                   const EstimatorConfig& c,
                                   const PlantParams& p) {
    return c.k3 * v1 * (i1 - i2) + 0.5 * c.k3 * c.k3 * p.C1 * v1 * v1 -
           c.k3 * P_I;
}

// Estimate as seen by the controller: optionally floored at zero (a CPL
// cannot generate), leaving the raw estimate untouched for logging.
inline double controller_estimate(double P_hat, const EstimatorConfig& c) {
    return c.clamp_estimate ? std::max(0.0, P_hat) : P_hat;
}

} // namespace cpldamp
