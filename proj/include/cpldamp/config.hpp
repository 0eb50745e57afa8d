#pragma once
// INI-style scenario profiles. Strict by design: unknown sections, unknown
// keys, duplicates, or malformed values are errors, so a typo never
// silently falls back to a default. Every key is optional; omitted keys
// keep the built-in values.
//
//   [plant]        r1 L1 C1 E r2 L2 C2 r3
//   [controller]   mode (open-loop | known-P | adaptive), k1, k2, x2bar
//   [estimator]    k3, Phat0, clamp_estimate (true | false)
//   [scenario]     P0, initial (equilibrium | comma-separated state),
//                  events ("t:P,t:P,..."), t_end,
//                  method (rk4 | rk45), dt, rtol, atol, dt_min, dt_max, stride
//
// Lines whose first non-blank character is '#' or ';' are comments.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ios>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "equilibria.hpp"
#include "sim.hpp"

namespace cpldamp {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double config_double(const std::string& v, const std::string& where) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw config_error(where + ": expected a number, got '" + v + "'");
    return out;
}

inline bool config_bool(const std::string& v, const std::string& where) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw config_error(where + ": expected true or false, got '" + v + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        out.push_back(trim(std::string_view(s).substr(
            pos, next == std::string::npos ? std::string::npos : next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace detail

inline Scenario parse_scenario_config(std::istream& in, const std::string& source) {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"plant", {"r1", "L1", "C1", "E", "r2", "L2", "C2", "r3"}},
        {"controller", {"mode", "k1", "k2", "x2bar"}},
        {"estimator", {"k3", "Phat0", "clamp_estimate"}},
        {"scenario",
         {"P0", "initial", "events", "t_end", "method", "dt", "rtol", "atol",
          "dt_min", "dt_max", "stride"}},
    };

    std::map<std::string, std::map<std::string, std::string>> kv;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = detail::trim(line);
        const std::string where = source + ":" + std::to_string(lineno);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw config_error(where + ": malformed section header '" + s + "'");
            section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
            if (!schema.count(section))
                throw config_error(where + ": unknown section [" + section + "]");
            if (kv.count(section))
                throw config_error(where + ": duplicate section [" + section + "]");
            kv[section];
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error(where + ": expected key=value, got '" + s + "'");
        if (section.empty())
            throw config_error(where + ": key outside any section");
        const std::string key = detail::trim(std::string_view(s).substr(0, eq));
        const std::string val = detail::trim(std::string_view(s).substr(eq + 1));
        if (!schema.at(section).count(key))
            throw config_error(where + ": unknown key '" + key + "' in [" + section + "]");
        if (kv[section].count(key))
            throw config_error(where + ": duplicate key '" + key + "'");
        kv[section][key] = val;
    }

    const auto value = [&](const char* sec, const char* key) -> const std::string* {
        const auto s = kv.find(sec);
        if (s == kv.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    const auto num = [&](const char* sec, const char* key, double& out) {
        if (const std::string* v = value(sec, key))
            out = detail::config_double(*v, source + ": [" + sec + "] " + key);
    };

    Scenario sc;
    sc.params = default_plant();
    num("plant", "r1", sc.params.r1);
    num("plant", "L1", sc.params.L1);
    num("plant", "C1", sc.params.C1);
    num("plant", "E", sc.params.E);
    num("plant", "r2", sc.params.r2);
    num("plant", "L2", sc.params.L2);
    num("plant", "C2", sc.params.C2);
    num("plant", "r3", sc.params.r3);

    std::string mode = "known-P";
    if (const std::string* v = value("controller", "mode")) mode = *v;
    if (mode == "open-loop") {
        sc.controller.reset();
    } else if (mode == "known-P" || mode == "adaptive") {
        ControllerConfig cc;
        cc.mode = mode == "adaptive" ? ControlMode::adaptive : ControlMode::known_power;
        num("controller", "k1", cc.k1);
        num("controller", "k2", cc.k2);
        num("controller", "x2bar", cc.x2bar);
        sc.controller = cc;
    } else {
        throw config_error(source +
                           ": [controller] mode must be open-loop, known-P, or "
                           "adaptive, got '" +
                           mode + "'");
    }

    num("estimator", "k3", sc.estimator.k3);
    num("estimator", "Phat0", sc.estimator.Phat0);
    if (const std::string* v = value("estimator", "clamp_estimate"))
        sc.estimator.clamp_estimate =
            detail::config_bool(*v, source + ": [estimator] clamp_estimate");

    num("scenario", "P0", sc.P0);
    num("scenario", "t_end", sc.t_end);
    if (const std::string* v = value("scenario", "stride")) {
        const double raw = detail::config_double(*v, source + ": [scenario] stride");
        if (raw < 1.0 || raw != static_cast<double>(static_cast<int>(raw)))
            throw config_error(source + ": [scenario] stride must be a positive integer");
        sc.output_stride = static_cast<int>(raw);
    }
    if (const std::string* v = value("scenario", "method")) {
        if (*v == "rk4")
            sc.integrator.method = IntegratorMethod::rk4;
        else if (*v == "rk45")
            sc.integrator.method = IntegratorMethod::rk45;
        else
            throw config_error(source + ": [scenario] method must be rk4 or rk45, got '" +
                               *v + "'");
    }
    num("scenario", "dt", sc.integrator.dt);
    num("scenario", "rtol", sc.integrator.adaptive.rtol);
    num("scenario", "atol", sc.integrator.adaptive.atol);
    num("scenario", "dt_min", sc.integrator.adaptive.dt_min);
    num("scenario", "dt_max", sc.integrator.adaptive.dt_max);

    if (const std::string* v = value("scenario", "events")) {
        sc.events.clear();
        if (!v->empty()) {
            for (const std::string& item : detail::split(*v, ',')) {
                const std::size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw config_error(source + ": [scenario] events entry '" + item +
                                       "' is not of the form t:P");
                const std::string where = source + ": [scenario] events entry '" + item + "'";
                sc.events.push_back(
                    {detail::config_double(detail::trim(std::string_view(item).substr(0, colon)), where),
                     detail::config_double(detail::trim(std::string_view(item).substr(colon + 1)), where)});
            }
        }
    }

    std::string initial = "equilibrium";
    if (const std::string* v = value("scenario", "initial")) initial = *v;
    if (initial == "equilibrium") {
        sc.params.validate();
        if (sc.controller) {
            sc.initial_state =
                assignable_equilibrium(sc.params, CplPower{sc.P0}, sc.controller->x2bar)
                    .xbar;
        } else {
            const OpenLoopEquilibria eq = open_loop_equilibria(sc.params, CplPower{sc.P0});
            if (!eq.high)
                throw no_equilibrium_error(
                    "no undamped operating point exists at P0; cannot start from equilibrium");
            sc.initial_state = *eq.high;
        }
    } else {
        const std::vector<std::string> parts = detail::split(initial, ',');
        const std::string where = source + ": [scenario] initial";
        std::vector<double> xs;
        for (const std::string& part : parts)
            xs.push_back(detail::config_double(part, where));
        if (sc.controller) {
            if (xs.size() != 4)
                throw config_error(where + ": a damped scenario needs 4 state values");
            sc.initial_state = NetworkState{xs[0], xs[1], xs[2], xs[3]};
        } else {
            if (xs.size() != 2)
                throw config_error(where + ": an undamped scenario needs 2 state values");
            sc.initial_state = OpenLoopState{xs[0], xs[1]};
        }
    }
    return sc;
}

inline Scenario load_scenario_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::ios_base::failure("cannot open config '" + path + "'");
    return parse_scenario_config(f, path);
}

// Built-in profile: the reference network resting at its damped equilibrium
// under a 100 W load, exact-model controller, one second horizon.
inline Scenario default_scenario() {
    Scenario sc;
    sc.params = default_plant();
    sc.P0 = 100.0;
    sc.controller = ControllerConfig{};
    sc.estimator = EstimatorConfig{};
    sc.initial_state =
        assignable_equilibrium(sc.params, CplPower{sc.P0}, sc.controller->x2bar).xbar;
    sc.t_end = 1.0;
    return sc;
}

// Default profile, overridable by pointing CPLDAMP_PROFILE at a config file.
inline Scenario scenario_from_environment_or_default() {
    if (const char* env = std::getenv("CPLDAMP_PROFILE")) return load_scenario_config(env);
    return default_scenario();
}

} // namespace cpldamp
