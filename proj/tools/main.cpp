// Command-line front end. Four subcommands:
//
//   equilibrium  operating points, admissible window, duty-cycle bound
//   stability    classify the undamped operating point (exit 0/3/2)
//   simulate     run a scenario or a canned experiment, write CSV/SVG
//   sweep        rerun one step scenario across a grid of load powers
//
// Exit codes: 0 ok, 1 bad configuration/usage, 2 outside the model's
// domain, 3 not stable, 4 I/O failure, 5 simulation did not complete.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <cpldamp/cpldamp.hpp>

namespace {

using namespace cpldamp;

void print_kv(const char* key, double v) {
    std::cout << key << '=' << format_double(v) << '\n';
}

Scenario base_scenario(const std::string& config_path) {
    if (!config_path.empty()) return load_scenario_config(config_path);
    return scenario_from_environment_or_default();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::ios_base::failure("error writing '" + path + "'");
}

int run_equilibrium(const std::string& config, double power, double bus) {
    const Scenario base = base_scenario(config);
    const PlantParams& p = base.params;
    const double P = std::isnan(power) ? base.P0 : power;
    const double x2bar = bus > 0.0 ? bus : p.E / 2.0;

    const OpenLoopEquilibria ol = open_loop_equilibria(p, CplPower{P});
    std::cout << "[open-loop]\n";
    print_kv("P", P);
    print_kv("max_power", max_open_loop_power(p));
    print_kv("discriminant", ol.discriminant);
    if (ol.high) {
        print_kv("high.i1", ol.high->i1);
        print_kv("high.v1", ol.high->v1);
    }
    if (ol.low) {
        print_kv("low.i1", ol.low->i1);
        print_kv("low.v1", ol.low->v1);
    }
    if (!ol.high) std::cout << "branches=none\n";

    const PowerWindow w = power_window(p, x2bar);
    std::cout << "\n[window]\n";
    print_kv("x2bar", x2bar);
    print_kv("P_low", w.low);
    print_kv("P_high", w.high);

    const OperatingPoint opt = optimal_operating_point(p);
    std::cout << "\n[optimal]\n";
    print_kv("x2bar", opt.x2bar);
    print_kv("P_low", opt.window.low);
    print_kv("P_high", opt.window.high);
    print_kv("realizable_below", opt.realizability_bound);

    const Equilibrium eq = assignable_equilibrium(p, CplPower{P}, x2bar);
    std::cout << "\n[assignable]\n";
    print_kv("x1bar", eq.xbar.x1);
    print_kv("x2bar", eq.xbar.x2);
    print_kv("x3bar", eq.xbar.x3);
    print_kv("x4bar", eq.xbar.x4);
    print_kv("ubar", eq.ubar);
    print_kv("kappa1", eq.kappa1);
    print_kv("kappa2", eq.kappa2);
    print_kv("residual_inf", equilibrium_residual_inf(eq, p));
    return 0;
}

int run_stability(const std::string& config, double power) {
    const Scenario base = base_scenario(config);
    const double P = std::isnan(power) ? base.P0 : power;
    const StabilityVerdict v = open_loop_stability(base.params, CplPower{P});
    std::cout << "[stability]\n";
    print_kv("P", P);
    std::cout << "regime=" << to_string(v.regime) << '\n';
    print_kv("necessary_bound", v.necessary_bound);
    std::cout << "classification=" << to_string(v.classification) << '\n';
    for (std::size_t i = 0; i < v.eigenvalues.size(); ++i) {
        const std::string key = "eigenvalue" + std::to_string(i + 1);
        print_kv((key + "_re").c_str(), v.eigenvalues[i].real());
        print_kv((key + "_im").c_str(), v.eigenvalues[i].imag());
    }
    return v.classification == StabilityClass::asymptotically_stable ? 0 : 3;
}

void print_run_summary(const char* section, const TimeSeries& ts) {
    std::cout << '[' << section << "]\n";
    std::cout << "status=" << to_string(ts.status) << '\n';
    std::cout << "rows=" << ts.rows.size() << '\n';
    const SimRow& last = ts.rows.back();
    print_kv("t_final", last.t);
    print_kv("x2_final", last.x2);
    print_kv("P_hat_final", last.P_hat);
    print_kv("u_applied_final", last.u_applied);
}

std::vector<double> column(const TimeSeries& ts, double SimRow::*field) {
    std::vector<double> out;
    out.reserve(ts.rows.size());
    for (const SimRow& r : ts.rows) out.push_back(r.*field);
    return out;
}

std::vector<PlotPanel> run_panels(const TimeSeries& ts, bool damped) {
    const std::vector<double> t = column(ts, &SimRow::t);
    std::vector<PlotPanel> panels;
    if (damped) {
        panels.push_back({"bus voltage [V]", {{"x2", t, column(ts, &SimRow::x2)}}});
        panels.push_back({"load power [W]",
                          {{"P_true", t, column(ts, &SimRow::P_true)},
                           {"P_hat", t, column(ts, &SimRow::P_hat)}}});
        panels.push_back({"duty cycle",
                          {{"u_raw", t, column(ts, &SimRow::u_raw)},
                           {"u_applied", t, column(ts, &SimRow::u_applied)}}});
        panels.push_back(
            {"shunt voltage [V]", {{"x4", t, column(ts, &SimRow::x4)}}});
    } else {
        panels.push_back({"bus voltage [V]", {{"v1", t, column(ts, &SimRow::x2)}}});
        panels.push_back(
            {"feeder current [A]", {{"i1", t, column(ts, &SimRow::x1)}}});
        panels.push_back({"load power [W]", {{"P", t, column(ts, &SimRow::P_true)}}});
    }
    return panels;
}

std::string csv_stem(const std::string& out) {
    if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0)
        return out.substr(0, out.size() - 4);
    return out;
}

int run_simulate(const std::string& config, const std::string& preset,
                 const std::string& out, const std::string& plot) {
    if (preset == "B") {
        const TimeSeries damped = simulate(preset_b_damped());
        const TimeSeries undamped = simulate(preset_b_open_loop());
        print_run_summary("damped", damped);
        std::cout << '\n';
        print_run_summary("undamped", undamped);
        if (!out.empty()) {
            const std::string stem = csv_stem(out);
            write_time_series_csv(stem + "-damped.csv", damped);
            write_time_series_csv(stem + "-undamped.csv", undamped);
            std::cout << "\n[files]\n";
            std::cout << "out_damped=" << stem << "-damped.csv\n";
            std::cout << "out_undamped=" << stem << "-undamped.csv\n";
        }
        if (!plot.empty()) {
            std::vector<PlotPanel> panels;
            panels.push_back(
                {"bus voltage [V]",
                 {{"damped x2", column(damped, &SimRow::t), column(damped, &SimRow::x2)},
                  {"undamped v1", column(undamped, &SimRow::t),
                   column(undamped, &SimRow::x2)}}});
            panels.push_back({"load power [W]",
                              {{"P_true", column(damped, &SimRow::t),
                                column(damped, &SimRow::P_true)}}});
            write_text_file(plot, render_log_time_svg(
                                      panels, "damped vs undamped load step"));
        }
        return damped.status == SimStatus::completed &&
                       undamped.status == SimStatus::completed
                   ? 0
                   : 5;
    }

    const Scenario sc = preset == "A" ? preset_a() : base_scenario(config);
    const TimeSeries ts = simulate(sc);
    print_run_summary("run", ts);
    if (!out.empty()) write_time_series_csv(out, ts);
    if (!plot.empty())
        write_text_file(plot, render_log_time_svg(
                                  run_panels(ts, sc.controller.has_value()),
                                  preset == "A" ? "adaptive load-step experiment"
                                                : "scenario run"));
    return ts.status == SimStatus::completed ? 0 : 5;
}

SweepGrid parse_grid(const std::string& spec) {
    const auto fail = [&]() {
        throw config_error("--grid expects start:stop:step, got '" + spec + "'");
    };
    const std::size_t c1 = spec.find(':');
    if (c1 == std::string::npos) fail();
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos) fail();
    SweepGrid g{};
    try {
        g.start = parse_double(std::string_view(spec).substr(0, c1));
        g.stop = parse_double(std::string_view(spec).substr(c1 + 1, c2 - c1 - 1));
        g.step = parse_double(std::string_view(spec).substr(c2 + 1));
    } catch (const std::exception&) {
        fail();
    }
    return g;
}

int run_sweep(const std::string& config, const std::string& preset,
              const std::string& grid_spec, const std::string& out) {
    const SweepGrid grid = parse_grid(grid_spec);
    Scenario base;
    if (!config.empty())
        base = load_scenario_config(config);
    else
        base = preset == "B" ? preset_b_damped() : preset_a();
    const std::vector<SweepPoint> pts = sweep_load_power(base, grid_points(grid));
    write_sweep_csv(out, pts);
    std::size_t converged = 0, skipped = 0;
    for (const SweepPoint& p : pts) {
        converged += p.verdict == SweepVerdict::converged;
        skipped += p.verdict == SweepVerdict::out_of_window;
    }
    std::cout << "[sweep]\n";
    std::cout << "points=" << pts.size() << '\n';
    std::cout << "converged=" << converged << '\n';
    std::cout << "out_of_window=" << skipped << '\n';
    std::cout << "out=" << out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "DC network with a constant power load: equilibrium/stability "
        "analysis and closed-loop shunt-damper simulation"};
    app.require_subcommand(1);
    int exit_code = 0;
    const double unset = std::numeric_limits<double>::quiet_NaN();

    std::string eq_config;
    double eq_power = unset, eq_bus = -1.0;
    auto* eq = app.add_subcommand(
        "equilibrium", "operating points and the admissible load window");
    eq->add_option("--config", eq_config, "scenario config file");
    eq->add_option("--power", eq_power, "load power [W] (default: profile P0)");
    eq->add_option("--bus-voltage", eq_bus,
                   "target bus voltage [V] (default: E/2)");
    eq->callback([&]() { exit_code = run_equilibrium(eq_config, eq_power, eq_bus); });

    std::string st_config;
    double st_power = unset;
    auto* st = app.add_subcommand(
        "stability", "classify the undamped operating point");
    st->add_option("--config", st_config, "scenario config file");
    st->add_option("--power", st_power, "load power [W] (default: profile P0)");
    st->callback([&]() { exit_code = run_stability(st_config, st_power); });

    std::string sim_config, sim_preset, sim_out, sim_plot;
    auto* sim = app.add_subcommand("simulate", "run a scenario");
    auto* sim_cfg_opt = sim->add_option("--config", sim_config, "scenario config file");
    sim->add_option("--paper-experiment", sim_preset,
                    "canned experiment: A (adaptive 479 W step) or B (damped "
                    "vs undamped 260 W step)")
        ->check(CLI::IsMember({"A", "B"}))
        ->excludes(sim_cfg_opt);
    sim->add_option("--out", sim_out, "write the time series CSV here");
    sim->add_option("--plot", sim_plot, "write an SVG plot here");
    sim->callback(
        [&]() { exit_code = run_simulate(sim_config, sim_preset, sim_out, sim_plot); });

    std::string sw_config, sw_preset, sw_grid, sw_out;
    auto* sw = app.add_subcommand(
        "sweep", "rerun a step scenario across a grid of load powers");
    auto* sw_cfg_opt = sw->add_option("--config", sw_config, "base scenario config file");
    sw->add_option("--paper-experiment", sw_preset,
                   "base the sweep on a canned experiment (default: A)")
        ->check(CLI::IsMember({"A", "B"}))
        ->excludes(sw_cfg_opt);
    sw->add_option("--grid", sw_grid, "load grid start:stop:step [W]")->required();
    sw->add_option("--out", sw_out, "write the sweep CSV here")->required();
    sw->callback([&]() { exit_code = run_sweep(sw_config, sw_preset, sw_grid, sw_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const cpldamp::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    }
    return exit_code;
}
