#pragma once
// Scenario runner: piecewise-constant load schedule, damped (closed-loop)
// or undamped (open-loop) network, co-integrated load estimator, and a
// sampled time series with forced rows at t = 0, every load step, and
// t_end. A collapse or step-size underflow ends the run early with the
// last accepted state as the final row.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "control.hpp"
#include "estimator.hpp"
#include "ode.hpp"
#include "params.hpp"
#include "plant.hpp"
#include "state.hpp"

namespace cpldamp {

enum class SimStatus { completed, voltage_collapse, damper_collapse, integrator_failure };

inline const char* to_string(SimStatus s) {
    switch (s) {
        case SimStatus::completed: return "completed";
        case SimStatus::voltage_collapse: return "voltage-collapse";
        case SimStatus::damper_collapse: return "damper-collapse";
        default: return "integrator-failure";
    }
}

enum class IntegratorMethod { rk4, rk45 };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::rk45;
    double dt = 1e-6;        // fixed-step size [s], rk4 only
    AdaptiveConfig adaptive; // rk45 only

    void validate() const {
        if (method == IntegratorMethod::rk4) {
            if (!(dt > 0.0))
                throw std::domain_error("fixed step size must be positive");
        } else {
            adaptive.validate();
        }
    }
};

// The load steps to P watts at time t and holds it until the next event.
struct Event {
    double t; // [s]
    double P; // [W]
};

struct Scenario {
    PlantParams params = default_plant();
    double P0 = 100.0;                          // load before the first event [W]
    std::optional<ControllerConfig> controller; // nullopt: undamped network
    EstimatorConfig estimator;
    std::variant<NetworkState, OpenLoopState> initial_state = NetworkState{};
    std::vector<Event> events; // strictly increasing times in (0, t_end)
    double t_end = 1.0;        // [s]
    IntegratorConfig integrator;
    int output_stride = 1; // emit every n-th accepted step

    void validate() const {
        params.validate();
        if (!(P0 >= 0.0)) throw std::domain_error("initial load power must be >= 0 W");
        if (!(t_end > 0.0)) throw std::domain_error("t_end must be positive");
        if (output_stride < 1) throw std::domain_error("output_stride must be >= 1");
        double prev = 0.0;
        for (const Event& e : events) {
            if (!(e.t > prev))
                throw std::domain_error(
                    "event times must be positive and strictly increasing");
            if (!(e.t < t_end))
                throw std::domain_error("event times must lie inside (0, t_end)");
            if (!(e.P >= 0.0)) throw std::domain_error("event load power must be >= 0 W");
            prev = e.t;
        }
        if (controller) {
            controller->validate();
            if (!std::holds_alternative<NetworkState>(initial_state))
                throw std::domain_error(
                    "a damped scenario takes a 4-state initial condition");
        } else if (!std::holds_alternative<OpenLoopState>(initial_state)) {
            throw std::domain_error(
                "an undamped scenario takes a 2-state initial condition");
        }
        estimator.validate();
        integrator.validate();
    }
};

struct SimRow {
    double t, x1, x2, x3, x4;
    double u_raw;     // controller output before saturation
    double u_applied; // duty cycle actually applied, in [0, 1]
    double P_true, P_hat;
    double V_error;  // storage function of the error coordinates [J]
    double z_energy; // shunt capacitor energy [J]

    std::array<double, 11> values() const {
        return {t, x1, x2, x3, x4, u_raw, u_applied, P_true, P_hat, V_error, z_energy};
    }
};

inline constexpr std::array<const char*, 11> kTimeSeriesColumns = {
    "t",      "x1",        "x2",     "x3",    "x4",      "u_raw",
    "u_applied", "P_true", "P_hat", "V_error", "z_energy"};

struct TimeSeries {
    std::vector<SimRow> rows;
    SimStatus status = SimStatus::completed;
};

namespace detail {

struct nonfinite_state_error : std::runtime_error {
    nonfinite_state_error() : std::runtime_error("state became non-finite") {}
};

// Shared segment loop. Pseg is read by the field/emit closures through the
// reference captured at the call site, so assigning it here switches the
// load for everyone at once. emit(t, y, P) must replace the previous row
// when t repeats, which makes the forced boundary rows (carrying the
// post-step power) win over a stride row landing on the same instant.
//
// The field itself never throws: trial stage evaluations at sick states
// produce inf/NaN and get rejected by step control. Collapse is judged on
// accepted states only, by inspect(y), so a wild candidate step near a
// stiff transient shrinks instead of ending the run.
template <std::size_t N, class Field, class Emit, class Inspect>
SimStatus run_segments(const Scenario& sc, const std::vector<double>& tb,
                       const std::vector<double>& Ps, double& Pseg,
                       std::array<double, N>& y, Field&& field, Emit&& emit,
                       Inspect&& inspect) {
    std::size_t accepted = 0;
    double t_last = 0.0;
    emit(0.0, y, Ps[0]);
    try {
        inspect(y);
        for (std::size_t seg = 0; seg + 1 < tb.size(); ++seg) {
            Pseg = Ps[seg];
            auto on_accept = [&](double t, const std::array<double, N>& s) {
                t_last = t;
                if (++accepted % static_cast<std::size_t>(sc.output_stride) == 0)
                    emit(t, s, Pseg);
                inspect(s);
            };
            bool ok = true;
            if (sc.integrator.method == IntegratorMethod::rk4)
                rk4_integrate(field, tb[seg], tb[seg + 1], y, sc.integrator.dt,
                              on_accept);
            else
                ok = rk45_integrate(field, tb[seg], tb[seg + 1], y,
                                    sc.integrator.adaptive, on_accept);
            if (!ok) {
                emit(t_last, y, Pseg);
                return SimStatus::integrator_failure;
            }
            const double P_next = (seg + 2 < tb.size()) ? Ps[seg + 1] : Ps[seg];
            emit(tb[seg + 1], y, P_next);
            t_last = tb[seg + 1];
        }
    } catch (const voltage_collapse_error&) {
        emit(t_last, y, Pseg);
        return SimStatus::voltage_collapse;
    } catch (const damper_collapse_error&) {
        emit(t_last, y, Pseg);
        return SimStatus::damper_collapse;
    } catch (const nonfinite_state_error&) {
        emit(t_last, y, Pseg);
        return SimStatus::integrator_failure;
    }
    return SimStatus::completed;
}

} // namespace detail

inline TimeSeries simulate(const Scenario& sc) {
    sc.validate();
    TimeSeries ts;
    std::vector<double> tb{0.0};
    std::vector<double> Ps{sc.P0};
    for (const Event& e : sc.events) {
        tb.push_back(e.t);
        Ps.push_back(e.P);
    }
    tb.push_back(sc.t_end);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double Pseg = Ps[0];

    auto push = [&ts](const SimRow& row) {
        if (!ts.rows.empty() && ts.rows.back().t == row.t)
            ts.rows.back() = row;
        else
            ts.rows.push_back(row);
    };

    if (sc.controller) {
        const ControllerConfig cc = *sc.controller;
        const ControlTarget target = control_target(sc.params, cc.x2bar);
        const NetworkState x0 = std::get<NetworkState>(sc.initial_state);
        std::array<double, 5> y{x0.x1, x0.x2, x0.x3, x0.x4,
                                estimator_init(x0.x2, sc.estimator, sc.params)};

        // The duty cycle is recomputed from the instantaneous state at every
        // stage evaluation, exactly as a sampled implementation with a fast
        // modulator would behave in the averaged model.
        auto field = [&](double, const std::array<double, 5>& s) {
            const NetworkState x{s[0], s[1], s[2], s[3]};
            const double P_hat = estimate_power(s[4], x.x2, sc.estimator, sc.params);
            const double P_ctrl = cc.mode == ControlMode::adaptive
                                      ? controller_estimate(P_hat, sc.estimator)
                                      : Pseg;
            const double u = saturate_duty(
                detail::gamma_unchecked(x, target, P_ctrl, cc.k1, cc.k2, sc.params));
            const auto dx = detail::network_rhs(x, u, sc.params, Pseg);
            return std::array<double, 5>{
                dx[0], dx[1], dx[2], dx[3],
                estimator_derivative(s[4], x.x2, x.x1, x.x3, sc.estimator,
                                     sc.params)};
        };

        auto inspect = [](const std::array<double, 5>& s) {
            for (double v : s)
                if (!std::isfinite(v)) throw detail::nonfinite_state_error{};
            if (s[1] <= kVoltageFloor) throw voltage_collapse_error(s[1]);
            if (s[3] <= kVoltageFloor) throw damper_collapse_error(s[3]);
        };

        auto emit = [&](double t, const std::array<double, 5>& s, double P) {
            const NetworkState x{s[0], s[1], s[2], s[3]};
            const double P_hat = estimate_power(s[4], x.x2, sc.estimator, sc.params);
            const double P_ctrl = cc.mode == ControlMode::adaptive
                                      ? controller_estimate(P_hat, sc.estimator)
                                      : P;
            // The terminal row of a collapsed run may sit beyond the guards;
            // the duty cycle and error energy are then undefined, not zero.
            double u_raw = nan, u_app = nan, V = nan;
            try {
                u_raw = gamma_raw(x, target, P_ctrl, cc.k1, cc.k2, sc.params);
                u_app = saturate_duty(u_raw);
            } catch (const std::exception&) {
            }
            try {
                V = error_energy(x, target, P, cc.k1, cc.k2, sc.params).V;
            } catch (const std::exception&) {
            }
            push(SimRow{t, x.x1, x.x2, x.x3, x.x4, u_raw, u_app, P, P_hat, V,
                        shunt_energy(x.x4, sc.params)});
        };

        ts.status = detail::run_segments<5>(sc, tb, Ps, Pseg, y, field, emit, inspect);
    } else {
        const OpenLoopState s0 = std::get<OpenLoopState>(sc.initial_state);
        std::array<double, 2> y{s0.i1, s0.v1};

        auto field = [&](double, const std::array<double, 2>& s) {
            const OpenLoopDerivative d =
                detail::open_loop_rhs(OpenLoopState{s[0], s[1]}, sc.params, Pseg);
            return std::array<double, 2>{d.di1, d.dv1};
        };

        auto inspect = [](const std::array<double, 2>& s) {
            for (double v : s)
                if (!std::isfinite(v)) throw detail::nonfinite_state_error{};
            if (s[1] <= kVoltageFloor) throw voltage_collapse_error(s[1]);
        };

        // No damper hardware: the damper columns are structurally zero and
        // the estimate column just mirrors the true load.
        auto emit = [&](double t, const std::array<double, 2>& s, double P) {
            push(SimRow{t, s[0], s[1], 0.0, 0.0, 0.0, 0.0, P, P, 0.0, 0.0});
        };

        ts.status = detail::run_segments<2>(sc, tb, Ps, Pseg, y, field, emit, inspect);
    }
    return ts;
}

} // namespace cpldamp
