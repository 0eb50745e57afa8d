#pragma once
// State-space types and the guard errors raised when a trajectory leaves the
// physically meaningful region (bus or damper capacitor voltage near zero).

#include <stdexcept>

namespace cpldamp {

// Voltage floor below which the constant-power-load current P/v is treated as
// a collapse rather than evaluated: the model is meaningless near v = 0.
inline constexpr double kVoltageFloor = 1e-3; // [V]

// Feeder-and-bus network alone (no damper attached).
struct OpenLoopState {
    double i1; // feeder inductor current [A]
    double v1; // bus capacitor voltage [V]
};

// Full network with the shunt damper: x = (i1, v1, i2, v2).
struct NetworkState {
    double x1; // feeder inductor current [A]
    double x2; // bus capacitor voltage [V]
    double x3; // damper inductor current [A]
    double x4; // damper capacitor voltage [V]
};

struct voltage_collapse_error : std::runtime_error {
    explicit voltage_collapse_error(double v)
        : std::runtime_error("bus voltage collapsed to the CPL singularity guard"),
          voltage(v) {}
    double voltage; // [V]
};

struct damper_collapse_error : std::runtime_error {
    explicit damper_collapse_error(double v)
        : std::runtime_error("damper capacitor voltage collapsed; duty-cycle law undefined"),
          voltage(v) {}
    double voltage; // [V]
};

} // namespace cpldamp
