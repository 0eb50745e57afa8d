#pragma once
// Vector fields of the DC network: the two-state open-loop model (feeder +
// bus + CPL) and the four-state model with the shunt-damper converter
// attached, in control-affine form dx/dt = f(x) + g(x) u.

#include <array>
#include <stdexcept>

#include "params.hpp"
#include "state.hpp"

namespace cpldamp {

struct OpenLoopDerivative {
    double di1; // [A/s]
    double dv1; // [V/s]
};

// f(x) and g(x) with the diagonal inertia matrix D = diag(L1,C1,L2,C2)
// already inverted, so dx/dt = f + g*u directly.
struct VectorFields {
    std::array<double, 4> f; // drift
    std::array<double, 4> g; // input direction
};

namespace detail {
// Raw right-hand sides with no floor guard: pure IEEE arithmetic that an
// adaptive integrator may evaluate at arbitrary (even sick) trial states,
// where a 1/x2 blowup is rejected by error control rather than trapped.
inline OpenLoopDerivative open_loop_rhs(const OpenLoopState& s,
                                        const PlantParams& p, double P) {
    return {(-p.r1 * s.i1 - s.v1 + p.E) / p.L1, (s.i1 - P / s.v1) / p.C1};
}

inline VectorFields network_fields(const NetworkState& x, const PlantParams& p,
                                   double P) {
    VectorFields vf;
    vf.f = {(-p.r1 * x.x1 - x.x2 + p.E) / p.L1,
            (x.x1 - P / x.x2 - x.x3) / p.C1,
            (-p.r2 * x.x3 + x.x2) / p.L2,
            (-x.x4 / p.r3) / p.C2};
    vf.g = {0.0, 0.0, -x.x4 / p.L2, x.x3 / p.C2};
    return vf;
}

inline std::array<double, 4> network_rhs(const NetworkState& x, double u,
                                         const PlantParams& p, double P) {
    const VectorFields vf = network_fields(x, p, P);
    return {vf.f[0] + vf.g[0] * u, vf.f[1] + vf.g[1] * u,
            vf.f[2] + vf.g[2] * u, vf.f[3] + vf.g[3] * u};
}
} // namespace detail

//   L1 di1/dt = -r1 i1 - v1 + E
//   C1 dv1/dt = i1 - P/v1
inline OpenLoopDerivative open_loop_dynamics(const OpenLoopState& s,
                                             const PlantParams& p, CplPower P) {
    if (s.v1 <= kVoltageFloor) throw voltage_collapse_error(s.v1);
    return detail::open_loop_rhs(s, p, P.watts);
}

inline VectorFields vector_fields(const NetworkState& x, const PlantParams& p,
                                  CplPower P) {
    if (x.x2 <= kVoltageFloor) throw voltage_collapse_error(x.x2);
    return detail::network_fields(x, p, P.watts);
}

// Four-state dynamics under an applied duty cycle u in [0,1]. Composed as
// f + g*u so the affine decomposition and this evaluation agree exactly,
// term for term, in floating point.
inline std::array<double, 4> closed_loop_dynamics(const NetworkState& x, double u,
                                                  const PlantParams& p, CplPower P) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("applied duty cycle outside [0,1]");
    const VectorFields vf = vector_fields(x, p, P);
    return {vf.f[0] + vf.g[0] * u, vf.f[1] + vf.g[1] * u,
            vf.f[2] + vf.g[2] * u, vf.f[3] + vf.g[3] * u};
}

// Total magnetic + electric energy stored in the network [J]. Its time
// derivative along the dynamics is E*x1 - r1*x1^2 - P - r2*x3^2 - x4^2/r3:
// the converter switches are lossless, so u never appears.
inline double stored_energy(const NetworkState& x, const PlantParams& p) {
    return 0.5 * (p.L1 * x.x1 * x.x1 + p.C1 * x.x2 * x.x2 +
                  p.L2 * x.x3 * x.x3 + p.C2 * x.x4 * x.x4);
}

} // namespace cpldamp
