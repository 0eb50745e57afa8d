#pragma once
// Shared test helpers: a fixed-seed RNG plus samplers producing random but
// physical networks, admissible operating points inside their power window,
// and off-equilibrium states near one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <cpldamp/cpldamp.hpp>

namespace testutil {

inline std::mt19937_64 seeded_rng(std::uint64_t salt = 0) {
    return std::mt19937_64{0x5eed2024ULL + salt};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline cpldamp::PlantParams random_plant(std::mt19937_64& rng) {
    cpldamp::PlantParams p{};
    p.r1 = log_uniform(rng, 0.05, 2.0);
    p.L1 = log_uniform(rng, 20e-6, 500e-6);
    p.C1 = log_uniform(rng, 50e-6, 2e-3);
    p.E = log_uniform(rng, 12.0, 400.0);
    p.r2 = log_uniform(rng, 1e-3, 0.1);
    p.L2 = log_uniform(rng, 20e-6, 1e-3);
    p.C2 = log_uniform(rng, 1e-4, 1e-2);
    p.r3 = log_uniform(rng, 10.0, 1e4);
    return p;
}

// A random network together with a bus target and a load strictly inside
// the admissible window for that target.
struct SampledPoint {
    cpldamp::PlantParams p;
    double x2bar;
    double P;
};

inline SampledPoint random_admissible(std::mt19937_64& rng) {
    const cpldamp::PlantParams p = random_plant(rng);
    const double x2bar = uniform(rng, 0.3, 0.8) * p.E;
    const cpldamp::PowerWindow w = cpldamp::power_window(p, x2bar);
    const double lo = std::max(0.0, w.low);
    const double P = lo + uniform(rng, 0.05, 0.95) * (w.high - lo);
    return {p, x2bar, P};
}

// State displaced from an equilibrium: voltages scaled (stay positive),
// currents shifted.
inline cpldamp::NetworkState perturbed(std::mt19937_64& rng,
                                       const cpldamp::NetworkState& xbar) {
    return {xbar.x1 + uniform(rng, -0.3, 0.3) * std::max(1.0, std::abs(xbar.x1)),
            xbar.x2 * uniform(rng, 0.7, 1.3),
            xbar.x3 + uniform(rng, -0.3, 0.3) * std::max(1.0, std::abs(xbar.x3)),
            xbar.x4 * uniform(rng, 0.7, 1.3)};
}

} // namespace testutil
