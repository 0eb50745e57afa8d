#pragma once
// Equilibrium analysis: the two open-loop operating points, the admissible
// power window of the damped network, the closed-form assignable equilibrium
// for a chosen bus voltage, and the duty-cycle realizability bound.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "params.hpp"
#include "plant.hpp"
#include "state.hpp"

namespace cpldamp {

// Roots of v^2 - E v + P r1 = 0: bus voltages at which the feeder delivers
// exactly the load power. "high" is the usual operating branch.
struct OpenLoopEquilibria {
    std::optional<OpenLoopState> high;
    std::optional<OpenLoopState> low;
    double discriminant; // E^2 - 4 P r1 [V^2]
};

inline OpenLoopEquilibria open_loop_equilibria(const PlantParams& p, CplPower P) {
    p.validate();
    OpenLoopEquilibria out;
    out.discriminant = p.E * p.E - 4.0 * P.watts * p.r1;
    const double merge_tol = 1e-12 * p.E * p.E; // treat |disc| below this as a double root
    if (std::abs(out.discriminant) <= merge_tol) {
        out.high = OpenLoopState{p.E / (2.0 * p.r1), p.E / 2.0};
    } else if (out.discriminant > 0.0) {
        const double s = std::sqrt(out.discriminant);
        out.high = OpenLoopState{(p.E - s) / (2.0 * p.r1), (p.E + s) / 2.0};
        out.low = OpenLoopState{(p.E + s) / (2.0 * p.r1), (p.E - s) / 2.0};
    }
    return out;
}

// Thrown where an operation needs an operating point that does not exist.
struct no_equilibrium_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Largest load the feeder can serve at all: E^2 / (4 r1).
inline double max_open_loop_power(const PlantParams& p) {
    p.validate();
    return p.E * p.E / (4.0 * p.r1);
}

// Open interval of load powers for which a bus voltage x2bar is assignable.
struct PowerWindow {
    double low;  // [W] (may be negative: regeneration headroom)
    double high; // [W]
};

inline PowerWindow power_window(const PlantParams& p, double x2bar) {
    p.validate();
    if (!(x2bar > 0.0)) throw std::domain_error("target bus voltage must be positive");
    const double high = x2bar * (p.E - x2bar) / p.r1;
    return {high - x2bar * x2bar / p.r2, high};
}

struct power_window_error : std::domain_error {
    power_window_error(const std::string& msg, double bound_w)
        : std::domain_error(msg), bound(bound_w) {}
    double bound; // the violated window endpoint [W]
};

// A damped-network operating point: state, constant duty cycle, and the two
// window polynomials kappa1/kappa2 whose positivity defines admissibility.
struct Equilibrium {
    NetworkState xbar;
    double ubar;   // steady duty cycle, in (0,1) below the realizability bound
    CplPower P;
    double x2bar;  // [V]
    double kappa1; // [W*Ohm]
    double kappa2; // [W*Ohm]
};

inline Equilibrium assignable_equilibrium(const PlantParams& p, CplPower P,
                                          double x2bar) {
    const PowerWindow w = power_window(p, x2bar);
    if (!(P.watts > w.low))
        throw power_window_error(
            "load power " + std::to_string(P.watts) +
                " W at or below the lower admissibility bound " +
                std::to_string(w.low) + " W for the requested bus voltage",
            w.low);
    if (!(P.watts < w.high))
        throw power_window_error(
            "load power " + std::to_string(P.watts) +
                " W at or above the existence bound " + std::to_string(w.high) +
                " W for the requested bus voltage",
            w.high);

    const double kappa1 = -x2bar * x2bar + p.E * x2bar - p.r1 * P.watts;
    const double kappa2 = (p.r1 + p.r2) * x2bar * x2bar - p.r2 * p.E * x2bar +
                          p.r1 * p.r2 * P.watts;
    Equilibrium eq{NetworkState{(p.E - x2bar) / p.r1, x2bar,
                                kappa1 / (p.r1 * x2bar),
                                std::sqrt(p.r3 * kappa1 * kappa2) / (p.r1 * x2bar)},
                   std::sqrt(kappa2 / (p.r3 * kappa1)), P, x2bar, kappa1, kappa2};
    return eq;
}

// Independent route to the steady duty cycle: the least-squares input that
// best cancels the drift, -(g.g)^{-1} g.f. At a true assignable equilibrium
// it reproduces the closed form exactly.
inline double equilibrium_input(const NetworkState& xbar, const PlantParams& p,
                                CplPower P) {
    const VectorFields vf = vector_fields(xbar, p, P);
    const double gg = vf.g[2] * vf.g[2] + vf.g[3] * vf.g[3];
    if (!(gg > 1e-300))
        throw std::domain_error("input direction vanishes (x3 = x4 = 0); no duty cycle acts");
    const double gf = vf.g[2] * vf.f[2] + vf.g[3] * vf.f[3];
    return -gf / gg;
}

// Rows of the left-annihilator applied to the drift, in physical units
// (V, A, W): zero exactly when some constant duty cycle can hold x still.
// Row 3 pairs (x3, x4) against the damper rows, which kills the u-terms
// identically.
inline std::array<double, 3> annihilator_residual(const NetworkState& x,
                                                  const PlantParams& p, CplPower P) {
    if (x.x2 <= kVoltageFloor) throw voltage_collapse_error(x.x2);
    return {-p.r1 * x.x1 - x.x2 + p.E,
            x.x1 - P.watts / x.x2 - x.x3,
            x.x3 * (-p.r2 * x.x3 + x.x2) + x.x4 * (-x.x4 / p.r3)};
}

// Worst-case equilibrium defect, with each row rescaled by its inertia entry
// so the components compare in physical units rather than amplified by 1/L, 1/C.
inline double equilibrium_residual_inf(const Equilibrium& eq, const PlantParams& p) {
    const VectorFields vf = vector_fields(eq.xbar, p, eq.P);
    const std::array<double, 4> scale{p.L1, p.C1, p.L2, p.C2};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double r = std::abs((vf.f[i] + vf.g[i] * eq.ubar) * scale[i]);
        if (r > worst) worst = r;
    }
    return worst;
}

// Bus-voltage choice that maximizes the serviceable load, with its power
// window and the ceiling below which the steady duty cycle stays under 1.
struct OperatingPoint {
    double x2bar;               // E/2 [V]
    PowerWindow window;         // admissible load interval at E/2
    double realizability_bound; // [W]
};

inline OperatingPoint optimal_operating_point(const PlantParams& p) {
    p.validate();
    const double x2bar = p.E / 2.0;
    return {x2bar, power_window(p, x2bar),
            p.E * p.E * (p.r2 + p.r3 - p.r1) / (4.0 * p.r1 * (p.r2 + p.r3))};
}

} // namespace cpldamp
