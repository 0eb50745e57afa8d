#pragma once
// Load-power sweep: rerun one damped step scenario across a grid of final
// demands. Each grid point replaces the power of every scheduled event and
// initializes the estimator at that demand (the "rated load" convention a
// commissioning engineer would use). Points outside the admissible window
// of the controller's bus target are flagged without running.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "equilibria.hpp"
#include "sim.hpp"

namespace cpldamp {

enum class SweepVerdict { converged, not_converged, out_of_window };

inline const char* to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::converged: return "converged";
        case SweepVerdict::not_converged: return "not-converged";
        default: return "out-of-window";
    }
}

struct SweepPoint {
    double P; // final demand at this grid point [W]
    SweepVerdict verdict;
    std::string status; // simulation status, or "not-run" for skipped points
    double x2_end;      // bus voltage at t_end [V]
    double x2_abs_err;  // |x2_end - x2bar| [V]
    double Phat_end;    // estimate at t_end [W]
};

struct SweepGrid {
    double start, stop, step;

    void validate() const {
        if (!(step > 0.0)) throw std::domain_error("sweep step must be positive");
        if (!(stop >= start))
            throw std::domain_error("sweep grid must have stop >= start");
    }
};

inline std::vector<double> grid_points(const SweepGrid& g) {
    g.validate();
    // Inclusive of stop, tolerant of the usual binary residue in step*i.
    const long long n =
        static_cast<long long>(std::floor((g.stop - g.start) / g.step + 1e-9));
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i)
        pts.push_back(g.start + static_cast<double>(i) * g.step);
    return pts;
}

// Convergence = the run completed and the final bus voltage sits within
// 1% of the controller's target.
inline std::vector<SweepPoint> sweep_load_power(const Scenario& base,
                                                const std::vector<double>& grid) {
    base.validate();
    if (!base.controller)
        throw std::domain_error("a load sweep needs a damped scenario");
    if (base.events.empty())
        throw std::domain_error(
            "a load sweep needs at least one scheduled load step to retarget");
    const double x2bar = base.controller->x2bar;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double P : grid) {
        bool admissible = true;
        try {
            assignable_equilibrium(base.params, CplPower{P}, x2bar);
        } catch (const std::domain_error&) {
            admissible = false;
        }
        if (!admissible) {
            out.push_back({P, SweepVerdict::out_of_window, "not-run", nan, nan, nan});
            continue;
        }
        Scenario sc = base;
        sc.estimator.Phat0 = P;
        for (Event& e : sc.events) e.P = P;
        const TimeSeries ts = simulate(sc);
        const SimRow& last = ts.rows.back();
        const double err = std::abs(last.x2 - x2bar);
        const bool converged =
            ts.status == SimStatus::completed && err <= 0.01 * x2bar;
        out.push_back({P,
                       converged ? SweepVerdict::converged
                                 : SweepVerdict::not_converged,
                       to_string(ts.status), last.x2, err, last.P_hat});
    }
    return out;
}

} // namespace cpldamp
