#pragma once
// Small-signal analysis: analytic Jacobians, eigenvalues of small dense
// matrices (characteristic polynomial + simultaneous root iteration), the
// capacitance-regime split, and the load-power stability bounds.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "equilibria.hpp"
#include "params.hpp"
#include "plant.hpp"
#include "state.hpp"

namespace cpldamp {

template <std::size_t N>
using Matrix = std::array<std::array<double, N>, N>;

// Linearization of the feeder/CPL pair about a bus voltage v1. The CPL
// contributes the destabilizing +P/(C1 v1^2) term.
inline Matrix<2> open_loop_jacobian(const OpenLoopState& s, const PlantParams& p,
                                    CplPower P) {
    p.validate();
    if (s.v1 <= kVoltageFloor) throw voltage_collapse_error(s.v1);
    return {{{-p.r1 / p.L1, -1.0 / p.L1},
             {1.0 / p.C1, P.watts / (p.C1 * s.v1 * s.v1)}}};
}

// Linearization of the damped network with the duty cycle frozen at u.
inline Matrix<4> closed_loop_jacobian(const NetworkState& x, double u,
                                      const PlantParams& p, CplPower P) {
    p.validate();
    if (x.x2 <= kVoltageFloor) throw voltage_collapse_error(x.x2);
    return {{{-p.r1 / p.L1, -1.0 / p.L1, 0.0, 0.0},
             {1.0 / p.C1, P.watts / (p.C1 * x.x2 * x.x2), -1.0 / p.C1, 0.0},
             {0.0, 1.0 / p.L2, -p.r2 / p.L2, -u / p.L2},
             {0.0, 0.0, u / p.C2, -1.0 / (p.r3 * p.C2)}}};
}

// Central-difference Jacobian of an arbitrary field; cross-check for the
// analytic forms above and for linearizing feedback-closed dynamics.
template <std::size_t N, class Field>
Matrix<N> numerical_jacobian(Field&& field, std::array<double, N> x,
                             double relative_step = 1e-6) {
    Matrix<N> J{};
    for (std::size_t j = 0; j < N; ++j) {
        const double h = relative_step * std::max(1.0, std::abs(x[j]));
        std::array<double, N> hi = x, lo = x;
        hi[j] += h;
        lo[j] -= h;
        const std::array<double, N> fhi = field(hi);
        const std::array<double, N> flo = field(lo);
        for (std::size_t i = 0; i < N; ++i) J[i][j] = (fhi[i] - flo[i]) / (2.0 * h);
    }
    return J;
}

// Monic characteristic polynomial by the Faddeev–LeVerrier recursion:
// M0 = I, AM = A M_{k-1}, c_k = -tr(AM)/k, M_k = AM + c_k I.
template <std::size_t N>
std::array<double, N + 1> characteristic_polynomial(const Matrix<N>& A) {
    std::array<double, N + 1> c{};
    c[0] = 1.0;
    Matrix<N> M{};
    for (std::size_t i = 0; i < N; ++i) M[i][i] = 1.0;
    for (std::size_t k = 1; k <= N; ++k) {
        Matrix<N> AM{};
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < N; ++l) s += A[i][l] * M[l][j];
                AM[i][j] = s;
            }
        double tr = 0.0;
        for (std::size_t i = 0; i < N; ++i) tr += AM[i][i];
        c[k] = -tr / static_cast<double>(k);
        M = AM;
        for (std::size_t i = 0; i < N; ++i) M[i][i] += c[k];
    }
    return c;
}

// All roots of a monic real polynomial (c[0] = 1) by the Durand–Kerner
// simultaneous iteration. Good to near machine precision for the low
// degrees used here.
inline std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& c) {
    if (c.empty() || c[0] != 1.0)
        throw std::invalid_argument("polynomial_roots expects a monic coefficient vector");
    const std::size_t n = c.size() - 1;
    if (n == 0) return {};
    double cmax = 0.0;
    for (std::size_t k = 1; k <= n; ++k) cmax = std::max(cmax, std::abs(c[k]));
    const double radius = 1.0 + cmax; // Cauchy bound on root magnitude
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9); // non-real, not a root of unity
    std::complex<double> w = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        w *= seed;
        z[k] = radius * w;
    }
    const auto eval = [&](std::complex<double> x) {
        std::complex<double> v = c[0];
        for (std::size_t k = 1; k <= n; ++k) v = v * x + c[k];
        return v;
    };
    const double tol = 1e-13 * std::max(1.0, radius);
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) denom *= z[k] - z[j];
            const std::complex<double> step = eval(z[k]) / denom;
            z[k] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < tol) return z;
    }
    throw std::runtime_error("root iteration for the characteristic polynomial did not converge");
}

// Eigenvalues of a small dense matrix. The matrix is rescaled by its largest
// entry first (eigenvalues scale linearly) so the polynomial coefficients
// stay O(1); the 2x2 case is closed-form via trace and determinant.
template <std::size_t N>
std::vector<std::complex<double>> eigenvalues(const Matrix<N>& A) {
    static_assert(N >= 2 && N <= 4, "sized for the models used here");
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) scale = std::max(scale, std::abs(A[i][j]));
    if (scale == 0.0) return std::vector<std::complex<double>>(N, 0.0);
    Matrix<N> B{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) B[i][j] = A[i][j] / scale;
    std::vector<std::complex<double>> out;
    if constexpr (N == 2) {
        const double tr = B[0][0] + B[1][1];
        const double det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            const double q = std::sqrt(disc);
            out = {{(tr + q) / 2.0, 0.0}, {(tr - q) / 2.0, 0.0}};
        } else {
            const double q = std::sqrt(-disc);
            out = {{tr / 2.0, q / 2.0}, {tr / 2.0, -q / 2.0}};
        }
    } else {
        const auto c = characteristic_polynomial(B);
        out = polynomial_roots(std::vector<double>(c.begin(), c.end()));
    }
    for (auto& e : out) e *= scale;
    return out;
}

// The bus capacitor is "small" when C1 < L1/r1^2; the two regimes carry
// different load-power bounds.
enum class CapacitanceRegime { small_capacitance, large_capacitance };

enum class StabilityClass { asymptotically_stable, marginal, unstable };

inline const char* to_string(CapacitanceRegime r) {
    return r == CapacitanceRegime::small_capacitance ? "small-capacitance"
                                                     : "large-capacitance";
}

inline const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::asymptotically_stable: return "asymptotically-stable";
        case StabilityClass::marginal: return "marginal";
        default: return "unstable";
    }
}

inline CapacitanceRegime capacitance_regime(const PlantParams& p) {
    p.validate();
    return p.C1 < p.L1 / (p.r1 * p.r1) ? CapacitanceRegime::small_capacitance
                                       : CapacitanceRegime::large_capacitance;
}

// Largest load power compatible with a stable undamped bus when the
// capacitor is small: E^2 C1 L1 r1 / (L1 + C1 r1^2)^2.
inline double small_capacitance_power_bound(const PlantParams& p) {
    p.validate();
    const double d = p.L1 + p.C1 * p.r1 * p.r1;
    return p.E * p.E * p.C1 * p.L1 * p.r1 / (d * d);
}

// Regime-dependent necessary bound on the load power. In the
// large-capacitance regime it coincides with the existence limit and is
// also sufficient; in the small-capacitance regime it is the tighter
// trace condition on the bus linearization.
inline double necessary_power_bound(const PlantParams& p) {
    return capacitance_regime(p) == CapacitanceRegime::small_capacitance
               ? small_capacitance_power_bound(p)
               : max_open_loop_power(p);
}

struct StabilityVerdict {
    CapacitanceRegime regime;
    double necessary_bound; // [W]
    StabilityClass classification;
    std::vector<std::complex<double>> eigenvalues; // of the high-branch linearization
};

// Classify the usual (high-voltage) operating point of the undamped
// network. Throws no_equilibrium_error when the load exceeds what the
// feeder can deliver at all.
inline StabilityVerdict open_loop_stability(const PlantParams& p, CplPower P) {
    const OpenLoopEquilibria eq = open_loop_equilibria(p, P);
    if (!eq.high)
        throw no_equilibrium_error(
            "load power exceeds the feeder limit; no operating point exists");
    StabilityVerdict v;
    v.regime = capacitance_regime(p);
    v.necessary_bound = necessary_power_bound(p);
    v.eigenvalues = eigenvalues(open_loop_jacobian(*eq.high, p, P));
    double rho = 0.0;
    for (const auto& e : v.eigenvalues) rho = std::max(rho, std::abs(e));
    const double tol = 1e-9 * std::max(1.0, rho); // marginal band around the axis
    bool any_right = false;
    bool all_left = true;
    for (const auto& e : v.eigenvalues) {
        if (e.real() > tol) any_right = true;
        if (!(e.real() < -tol)) all_left = false;
    }
    v.classification = any_right ? StabilityClass::unstable
                       : all_left ? StabilityClass::asymptotically_stable
                                  : StabilityClass::marginal;
    return v;
}

} // namespace cpldamp
