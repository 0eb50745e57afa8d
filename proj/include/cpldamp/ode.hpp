#pragma once
// Fixed-step RK4 and an embedded Dormand–Prince 5(4) pair with FSAL reuse
// and PI-free step control. Both drivers call back after every accepted
// step and land exactly on the segment end, which is what lets the
// simulation layer stitch piecewise-constant load segments together and
// sample both integrators at identical times.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cpldamp {

template <std::size_t N, class Field>
std::array<double, N> rk4_step(Field&& f, double t, const std::array<double, N>& y,
                               double dt) {
    const std::array<double, N> k1 = f(t, y);
    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    const std::array<double, N> k4 = f(t + dt, tmp);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// March [t0, t1] with steps of exactly dt, shrinking only the final step to
// land on t1. Step times come from t0 + i*dt (multiplication, not
// accumulation) so long runs do not drift. on_accept(t, y) fires after
// every step.
template <std::size_t N, class Field, class OnAccept>
void rk4_integrate(Field&& f, double t0, double t1, std::array<double, N>& y,
                   double dt, OnAccept&& on_accept) {
    if (!(dt > 0.0)) throw std::domain_error("fixed step size must be positive");
    const double span = t1 - t0;
    if (!(span > 0.0)) return;
    long long n = static_cast<long long>(std::ceil(span / dt - 1e-9));
    if (n < 1) n = 1;
    double t = t0;
    for (long long i = 1; i <= n; ++i) {
        const double tn = (i == n) ? t1 : t0 + static_cast<double>(i) * dt;
        y = rk4_step(f, t, y, tn - t);
        t = tn;
        on_accept(t, y);
    }
}

struct AdaptiveConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double dt_min = 1e-13; // below this the problem is declared too stiff
    double dt_max = 1e-4;

    void validate() const {
        if (!(rtol > 0.0) || !(atol > 0.0))
            throw std::domain_error("adaptive tolerances must be positive");
        if (!(dt_min > 0.0) || !(dt_max >= dt_min))
            throw std::domain_error("adaptive step bounds must satisfy 0 < dt_min <= dt_max");
    }
};

namespace detail {
// Dormand–Prince 5(4) tableau. The last row of a equals b5, so the final
// stage is evaluated at the accepted solution (FSAL).
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84,       0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,    0,            7571.0 / 16695,
                                    393.0 / 640,       -92097.0 / 339200,
                                    187.0 / 2100,      1.0 / 40};
} // namespace detail

// Adaptive march of [t0, t1]. Error control is the RMS of the component
// errors scaled by atol + rtol*max(|y_i|, |y5_i|); a step is accepted when
// that norm is <= 1, and the next step is scaled by 0.9*err^(-1/5) clamped
// to [0.2, 5] and capped at dt_max. Returns false (leaving y at the last
// accepted state) if meeting the tolerance would need a step below dt_min.
template <std::size_t N, class Field, class OnAccept>
bool rk45_integrate(Field&& f, double t0, double t1, std::array<double, N>& y,
                    const AdaptiveConfig& cfg, OnAccept&& on_accept) {
    cfg.validate();
    if (!(t1 > t0)) return true;
    double t = t0;
    double dt_prop = std::min(cfg.dt_max, t1 - t0);
    std::array<std::array<double, N>, 7> k;
    k[0] = f(t, y);
    while (t < t1) {
        const bool last = (t1 - t) <= dt_prop;
        const double h = last ? (t1 - t) : dt_prop;

        std::array<double, N> y5{};
        for (int s = 1; s < 7; ++s) {
            std::array<double, N> ys;
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += detail::dp_a[s][j] * k[j][i];
                ys[i] = y[i] + h * acc;
            }
            if (s == 6) y5 = ys; // FSAL: stage 7 sits on the 5th-order solution
            k[s] = f(t + detail::dp_c[s] * h, ys);
        }

        double sum = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double de = 0.0;
            for (int j = 0; j < 7; ++j)
                de += (detail::dp_b5[j] - detail::dp_b4[j]) * k[j][i];
            de *= h;
            const double sc =
                cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double r = de / sc;
            sum += r * r;
        }
        const double err = std::sqrt(sum / static_cast<double>(N));

        if (err <= 1.0) {
            y = y5;
            k[0] = k[6];
            t = last ? t1 : t + h;
            on_accept(t, y);
            const double factor =
                err == 0.0 ? 5.0
                           : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            dt_prop = std::min(dt_prop * factor, cfg.dt_max);
        } else {
            // err may be NaN/inf if the field overflowed: treat as a hard reject.
            const double factor =
                std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9)
                                   : 0.2;
            dt_prop = h * factor;
            if (!std::isfinite(dt_prop) || dt_prop < cfg.dt_min) return false;
        }
    }
    return true;
}

} // namespace cpldamp
