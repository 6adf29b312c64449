#pragma once

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cryosim/control.hpp"
#include "cryosim/faults.hpp"
#include "cryosim/params.hpp"
#include "cryosim/scenario.hpp"

namespace cryo {

struct ParsedConfig {
    CoolerParams params;
    LoopConfig loop;
    Scenario scenario;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view v, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const std::string tmp(v);
        const double out = std::stod(tmp, &used);
        if (used != tmp.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("invalid number '" + std::string(v) + "' for " + key, line, key);
    }
}

inline bool parse_bool(std::string_view v, int line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean '" + std::string(v) + "' for " + key, line, key);
}

/// Profiles are whitespace-separated t:value pairs, e.g. "0:170 400:151".
inline StepProfile parse_profile(std::string_view v, int line, const std::string& key) {
    StepProfile prof;
    std::istringstream iss{std::string(v)};
    std::string tok;
    while (iss >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw ConfigError("profile entries must be t:value pairs, got '" + tok + "'", line, key);
        const double t = parse_number(std::string_view(tok).substr(0, colon), line, key);
        const double val = parse_number(std::string_view(tok).substr(colon + 1), line, key);
        prof.points.emplace_back(t, val);
    }
    if (prof.points.empty())
        throw ConfigError("empty profile for " + key, line, key);
    try {
        prof.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string(e.what()) + " for " + key, line, key);
    }
    return prof;
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_profile(const StepProfile& prof) {
    std::string out;
    for (std::size_t i = 0; i < prof.points.size(); ++i) {
        if (i) out += ' ';
        out += fmt_double(prof.points[i].first);
        out += ':';
        out += fmt_double(prof.points[i].second);
    }
    return out;
}

}  // namespace detail

/// Parses the flat key = value format with [plant] / [controller] /
/// [scenario] sections. Unknown sections and keys are rejected with the
/// offending line number; parameter invariants are checked after parsing.
/// An absent or empty scenario section yields the documented defaults
/// (ambient start, 600 s duration, 1 s sampling).
inline ParsedConfig parse_config(const std::string& text) {
    ParsedConfig cfg;
    enum class Section { None, Plant, Controller, Scen } section = Section::None;

    std::istringstream iss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(iss, raw)) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            const std::string_view name = line.substr(1, line.size() - 2);
            if (name == "plant") section = Section::Plant;
            else if (name == "controller") section = Section::Controller;
            else if (name == "scenario") section = Section::Scen;
            else throw ConfigError("unknown section [" + std::string(name) + "]", line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key = value", line_no);
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected key = value", line_no);

        auto num = [&] { return detail::parse_number(value, line_no, key); };

        switch (section) {
            case Section::None:
                throw ConfigError("key outside any section", line_no, key);
            case Section::Plant: {
                CoolerParams& p = cfg.params;
                if (key == "mass") p.mass = num();
                else if (key == "damping") p.damping = num();
                else if (key == "spring") p.spring = num();
                else if (key == "motor_const") p.motor_const = num();
                else if (key == "piston_area") p.piston_area = num();
                else if (key == "comp_length") p.comp_length = num();
                else if (key == "exp_diameter") p.exp_diameter = num();
                else if (key == "exp_length") p.exp_length = num();
                else if (key == "charge_pressure") p.charge_pressure = num();
                else if (key == "ambient") p.ambient = num();
                else if (key == "drive_freq") p.drive_freq = num();
                else if (key == "eps") p.regen_eff = num();
                else if (key == "film_coeff") p.film_coeff = num();
                else if (key == "load_area") p.load_area = num();
                else if (key == "reject_ua") p.reject_ua = num();
                else if (key == "matrix_heat_cap") p.matrix_heat_cap = num();
                else if (key == "helium_cp") p.helium_cp = num();
                else throw ConfigError("unknown key '" + key + "' in [plant]", line_no, key);
                break;
            }
            case Section::Controller: {
                LoopConfig& l = cfg.loop;
                if (key == "mode") {
                    if (value == "1dof") l.mode = LoopMode::OneDof;
                    else if (value == "2dof") l.mode = LoopMode::TwoDof;
                    else throw ConfigError("mode must be 1dof or 2dof", line_no, key);
                } else if (key == "kp") l.pi.kp = num();
                else if (key == "ki") l.pi.ki = num();
                else if (key == "ts") l.pi.ts = num();
                else if (key == "u_min") l.pi.u_min = num();
                else if (key == "u_max") l.pi.u_max = num();
                else if (key == "anti_windup") l.pi.anti_windup = detail::parse_bool(value, line_no, key);
                else if (key == "filter_a") l.filter.a = num();
                else if (key == "drive_gain") l.drive_gain = num();
                else if (key == "sensor_lag") l.sensor_lag = num();
                else throw ConfigError("unknown key '" + key + "' in [controller]", line_no, key);
                break;
            }
            case Section::Scen: {
                Scenario& sc = cfg.scenario;
                if (key == "duration") sc.duration = num();
                else if (key == "sample_period") sc.sample_period = num();
                else if (key == "setpoint") sc.setpoint = detail::parse_profile(value, line_no, key);
                else if (key == "load") sc.load = detail::parse_profile(value, line_no, key);
                else if (key == "current") sc.current = detail::parse_profile(value, line_no, key);
                else throw ConfigError("unknown key '" + key + "' in [scenario]", line_no, key);
                break;
            }
        }
    }

    cfg.params.validate();
    try {
        cfg.loop.validate();
        cfg.scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

/// Serializes a full configuration; parse_config(serialize_config(c)) gives
/// identical structures (full float precision).
inline std::string serialize_config(const ParsedConfig& cfg) {
    using detail::fmt_double;
    std::string out;
    out += "# cryosim configuration (SI units: Pa, K, s, m, W)\n[plant]\n";
    const CoolerParams& p = cfg.params;
    out += "mass = " + fmt_double(p.mass) + "\n";
    out += "damping = " + fmt_double(p.damping) + "\n";
    out += "spring = " + fmt_double(p.spring) + "\n";
    out += "motor_const = " + fmt_double(p.motor_const) + "\n";
    out += "piston_area = " + fmt_double(p.piston_area) + "\n";
    out += "comp_length = " + fmt_double(p.comp_length) + "\n";
    out += "exp_diameter = " + fmt_double(p.exp_diameter) + "\n";
    out += "exp_length = " + fmt_double(p.exp_length) + "\n";
    out += "charge_pressure = " + fmt_double(p.charge_pressure) + "\n";
    out += "ambient = " + fmt_double(p.ambient) + "\n";
    out += "drive_freq = " + fmt_double(p.drive_freq) + "\n";
    out += "eps = " + fmt_double(p.regen_eff) + "\n";
    out += "film_coeff = " + fmt_double(p.film_coeff) + "\n";
    out += "load_area = " + fmt_double(p.load_area) + "\n";
    out += "reject_ua = " + fmt_double(p.reject_ua) + "\n";
    out += "matrix_heat_cap = " + fmt_double(p.matrix_heat_cap) + "\n";
    out += "helium_cp = " + fmt_double(p.helium_cp) + "\n";

    out += "\n[controller]\n";
    const LoopConfig& l = cfg.loop;
    out += std::string("mode = ") + (l.mode == LoopMode::TwoDof ? "2dof" : "1dof") + "\n";
    out += "kp = " + fmt_double(l.pi.kp) + "\n";
    out += "ki = " + fmt_double(l.pi.ki) + "\n";
    out += "ts = " + fmt_double(l.pi.ts) + "\n";
    out += "u_min = " + fmt_double(l.pi.u_min) + "\n";
    out += "u_max = " + fmt_double(l.pi.u_max) + "\n";
    out += std::string("anti_windup = ") + (l.pi.anti_windup ? "true" : "false") + "\n";
    out += "filter_a = " + fmt_double(l.filter.a) + "\n";
    out += "drive_gain = " + fmt_double(l.drive_gain) + "\n";
    out += "sensor_lag = " + fmt_double(l.sensor_lag) + "\n";

    out += "\n[scenario]\n";
    const Scenario& sc = cfg.scenario;
    out += "duration = " + fmt_double(sc.duration) + "\n";
    out += "sample_period = " + fmt_double(sc.sample_period) + "\n";
    if (!sc.setpoint.empty()) out += "setpoint = " + detail::fmt_profile(sc.setpoint) + "\n";
    if (!sc.load.empty()) out += "load = " + detail::fmt_profile(sc.load) + "\n";
    if (!sc.current.empty()) out += "current = " + detail::fmt_profile(sc.current) + "\n";
    return out;
}

}  // namespace cryo
