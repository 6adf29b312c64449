#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cryosim/calibrate.hpp"
#include "cryosim/config.hpp"
#include "cryosim/io.hpp"
#include "cryosim/sim.hpp"
#include "cryosim/trace.hpp"

namespace cryo::cli {

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kConfigError = 2,
    kPlantFault = 3,
    kCalibrationFailure = 4,
    kNonConvergence = 5,
};

inline constexpr const char* kUsageText = R"(cryosim - linear-motor Stirling cryocooler simulator

usage: cryosim <command> [--params FILE] [--scenario FILE] [--out DIR] [--seedless] [options]

commands:
  cooldown             start-up cool-down run        [--power W] [--coil OHMS]
  step-current         open-loop current steps (steady map over the drive band)
  pulse-load           thermal load pulses from the high-current baseline
  closed-loop          closed-loop run from the scenario set-point profile
  calibrate            fit closure parameters        [--target I:QW:TK ...]
  compare-controllers  run the 1-DOF / 2-DOF comparison suite

options:
  --params FILE    configuration file ([plant] and [controller] sections)
  --scenario FILE  configuration file providing the [scenario] section
  --out DIR        output directory (default $CRYOSIM_OUT or ./out)
  --seedless       accepted for compatibility; runs are always deterministic
  --power W        cooldown electrical input power (default 7.27)
  --coil OHMS      cooldown coil resistance (default 3.635)
  --target I:Q:T   calibration target, drive A : load W : cold-tip K

outputs: trace.csv and summary.json in the output directory; exit codes:
  0 success, 1 usage, 2 config error, 3 plant fault, 4 calibration failure,
  5 non-convergence
)";

struct Args {
    std::string command;
    std::optional<std::string> params_file;
    std::optional<std::string> scenario_file;
    std::string out_dir = "out";
    double power = 7.27;
    double coil = kDefaultCoilResistance;
    std::vector<CalibrationTarget> targets;
    bool seedless = false;
};

namespace detail {

inline double flag_number(const std::vector<std::string>& argv, std::size_t& i,
                          const std::string& flag) {
    if (i + 1 >= argv.size()) throw ConfigError("missing value for " + flag);
    try {
        return std::stod(argv[++i]);
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + flag + ": " + argv[i]);
    }
}

inline CalibrationTarget parse_target(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("target must be I:Q:T, got '" + spec + "'");
    try {
        return {std::stod(spec.substr(0, c1)), std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                std::stod(spec.substr(c2 + 1))};
    } catch (const std::exception&) {
        throw ConfigError("target must be numeric I:Q:T, got '" + spec + "'");
    }
}

inline Args parse_args(const std::vector<std::string>& argv) {
    Args a;
    if (argv.empty()) throw ConfigError("no command");
    a.command = argv[0];
    if (const char* env = std::getenv("CRYOSIM_OUT")) a.out_dir = env;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        const std::string& s = argv[i];
        if (s == "--params") {
            if (i + 1 >= argv.size()) throw ConfigError("missing value for --params");
            a.params_file = argv[++i];
        } else if (s == "--scenario") {
            if (i + 1 >= argv.size()) throw ConfigError("missing value for --scenario");
            a.scenario_file = argv[++i];
        } else if (s == "--out") {
            if (i + 1 >= argv.size()) throw ConfigError("missing value for --out");
            a.out_dir = argv[++i];
        } else if (s == "--power") {
            a.power = flag_number(argv, i, "--power");
        } else if (s == "--coil") {
            a.coil = flag_number(argv, i, "--coil");
        } else if (s == "--target") {
            if (i + 1 >= argv.size()) throw ConfigError("missing value for --target");
            a.targets.push_back(parse_target(argv[++i]));
        } else if (s == "--seedless") {
            a.seedless = true;
        } else {
            throw ConfigError("unknown option " + s);
        }
    }
    return a;
}

inline void emit_params(JsonWriter& w, const CoolerParams& p) {
    w.begin_object("params");
    w.field("mass", p.mass).field("damping", p.damping).field("spring", p.spring);
    w.field("motor_const", p.motor_const).field("piston_area", p.piston_area);
    w.field("comp_length", p.comp_length).field("exp_diameter", p.exp_diameter);
    w.field("exp_length", p.exp_length).field("charge_pressure", p.charge_pressure);
    w.field("ambient", p.ambient).field("drive_freq", p.drive_freq);
    w.field("eps", p.regen_eff).field("film_coeff", p.film_coeff);
    w.field("load_area", p.load_area).field("reject_ua", p.reject_ua);
    w.field("matrix_heat_cap", p.matrix_heat_cap).field("helium_cp", p.helium_cp);
    w.end_object();
}

inline void emit_metrics(JsonWriter& w, const std::string& key, const ResponseMetrics& m) {
    w.begin_object(key);
    w.field("peak_time_s", m.peak_time);
    w.field("peak_overshoot_K", m.peak_overshoot);
    w.field("settling_time_s", m.settling_time);
    w.field("steady_value_K", m.steady_value);
    w.end_object();
}

inline Trace slice(const Trace& tr, double t0, double t1) {
    Trace out;
    out.sample_period = tr.sample_period;
    for (const TracePoint& pt : tr.points)
        if (pt.t >= t0 && pt.t < t1) out.points.push_back(pt);
    return out;
}

struct RunContext {
    std::string command_line;
    std::string config_hash;
    std::filesystem::path out;
};

inline RunContext make_context(const Args& a, const std::string& config_text) {
    RunContext ctx;
    ctx.command_line = "cryosim " + a.command;
    if (a.params_file) ctx.command_line += " --params " + *a.params_file;
    if (a.scenario_file) ctx.command_line += " --scenario " + *a.scenario_file;
    ctx.config_hash = hex64(fnv1a64(config_text));
    ctx.out = a.out_dir;
    std::filesystem::create_directories(ctx.out);
    return ctx;
}

inline void write_outputs(const RunContext& ctx, const Trace& tr, const JsonWriter& summary) {
    write_file((ctx.out / "trace.csv").string(), trace_to_csv(tr));
    write_file((ctx.out / "summary.json").string(), summary.str() + "\n");
}

}  // namespace detail

/// The controller comparison experiment: hold 170 K, step to 151 K, then a
/// 0.5 W / 45 s disturbance pulse once the loop has settled.
struct CompareScenario {
    double sp_high = 170.0;
    double sp_low = 151.0;
    double t_step = 1000.0;
    double t_pulse = 2600.0;
    double pulse_w = 0.5;
    double pulse_len = 45.0;
    double duration = 3400.0;

    Scenario build() const {
        Scenario sc;
        sc.duration = duration;
        sc.sample_period = 1.0;
        sc.setpoint.points = {{0.0, sp_high}, {t_step, sp_low}};
        sc.load.points = {{0.0, 0.0}, {t_pulse, pulse_w}, {t_pulse + pulse_len, 0.0}};
        return sc;
    }

    double sp_band() const { return std::max(0.02 * std::abs(sp_high - sp_low), 0.1); }
};

/// Entry point used by the binary and by tests. Returns an ExitCode.
inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    if (argv.empty() || argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help") {
        err << kUsageText;
        return kUsage;
    }

    Args args;
    try {
        args = detail::parse_args(argv);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n" << kUsageText;
        return kUsage;
    }

    const bool known = args.command == "cooldown" || args.command == "step-current" ||
                       args.command == "pulse-load" || args.command == "closed-loop" ||
                       args.command == "calibrate" || args.command == "compare-controllers";
    if (!known) {
        err << "error: unknown command '" << args.command << "'\n" << kUsageText;
        return kUsage;
    }

    try {
        // Assemble the configuration: params/controller from --params,
        // scenario from --scenario (either may carry any section).
        ParsedConfig cfg;
        std::string config_text;
        auto read_config = [](const std::string& path) {
            try {
                return read_file(path);
            } catch (const SimFault& e) {
                throw ConfigError(e.what());
            }
        };
        if (args.params_file) {
            config_text = read_config(*args.params_file);
            cfg = parse_config(config_text);
        }
        if (args.scenario_file) {
            const std::string sc_text = read_config(*args.scenario_file);
            const ParsedConfig sc_cfg = parse_config(sc_text);
            cfg.scenario = sc_cfg.scenario;
            config_text += sc_text;
        }
        const detail::RunContext ctx = detail::make_context(args, config_text);

        JsonWriter w;
        w.begin_object();
        w.field("command", ctx.command_line);
        w.field("config_hash", ctx.config_hash);

        if (args.command == "cooldown") {
            const CooldownResult r = cooldown(cfg.params, args.power, args.coil);
            w.field("input_power_W", args.power);
            w.field("coil_resistance_ohm", args.coil);
            w.field("drive_current_A", r.current);
            w.field("final_cold_K", r.final_cold);
            w.field("cooldown_time_s", r.cooldown_time);
            detail::emit_params(w, cfg.params);
            w.end_object();
            detail::write_outputs(ctx, r.trace, w);
            out << "cooldown: " << r.cooldown_time << " s to within 1 K of " << r.final_cold
                << " K at " << r.current << " A\n";
            return kOk;
        }

        if (args.command == "step-current") {
            // Default schedule: the four validation currents, coldest last.
            std::vector<double> currents{1.48, 1.55, 1.69, 1.83};
            Trace tr;
            if (args.scenario_file && !cfg.scenario.current.empty()) {
                tr = run_open_loop(cfg.params, cfg.scenario);
            } else {
                Scenario sc;
                sc.duration = 900.0 * static_cast<double>(currents.size());
                sc.sample_period = 1.0;
                for (std::size_t i = 0; i < currents.size(); ++i)
                    sc.current.points.emplace_back(900.0 * static_cast<double>(i), currents[i]);
                tr = run_open_loop(cfg.params, sc);
            }
            w.begin_array("steady_points");
            out << "steady map:\n";
            std::string rows;
            for (double amp : currents) {
                const SteadyState st = steady_state(cfg.params, amp, 0.0);
                JsonWriter rw;
                rw.begin_object();
                rw.field("current_A", amp);
                rw.field("cold_K", st.cold);
                rw.field("hot_K", st.hot);
                rw.field("cycles", st.cycles);
                rw.end_object();
                rows += (rows.empty() ? "" : ", ") + rw.str();
                out << "  " << amp << " A -> " << st.cold << " K\n";
            }
            w.raw_elements(rows);
            w.end_array();
            detail::emit_params(w, cfg.params);
            w.end_object();
            detail::write_outputs(ctx, tr, w);
            return kOk;
        }

        if (args.command == "pulse-load") {
            const double baseline_amp = 1.83;
            const auto [steady0, cycles0] = run_to_steady(cfg.params, baseline_amp, 0.0);
            Scenario sc;
            if (args.scenario_file && !cfg.scenario.load.empty()) {
                sc = cfg.scenario;
                if (sc.current.empty()) sc.current.points = {{0.0, baseline_amp}};
            } else {
                sc.duration = 1800.0;
                sc.sample_period = 1.0;
                sc.current.points = {{0.0, baseline_amp}};
                sc.load.points = {{0.0, 0.0},     {200.0, 0.1188}, {245.0, 0.0},
                                  {800.0, 0.2205}, {845.0, 0.0},   {1400.0, 0.330},
                                  {1445.0, 0.0}};
            }
            sc.initial_state = steady0;
            const Trace tr = run_open_loop(cfg.params, sc);

            w.field("baseline_current_A", baseline_amp);
            w.field("baseline_cold_K", steady0.exp.temperature);
            w.begin_array("pulses");
            std::string rows;
            out << "baseline " << steady0.exp.temperature << " K at " << baseline_amp << " A\n";
            for (std::size_t i = 0; i + 1 < sc.load.points.size(); ++i) {
                const auto [t_on, watts] = sc.load.points[i];
                if (watts <= 0.0) continue;
                const double t_off = sc.load.points[i + 1].first;
                double peak = -1.0;
                for (const TracePoint& pt : tr.points)
                    if (pt.t >= t_on && pt.t < t_off + 300.0) peak = std::max(peak, pt.cold);
                JsonWriter rw;
                rw.begin_object();
                rw.field("load_W", watts);
                rw.field("peak_K", peak);
                rw.field("rise_K", peak - steady0.exp.temperature);
                rw.end_object();
                rows += (rows.empty() ? "" : ", ") + rw.str();
                out << "  " << watts * 1e3 << " mW pulse -> peak " << peak << " K\n";
            }
            w.raw_elements(rows);
            w.end_array();
            detail::emit_params(w, cfg.params);
            w.end_object();
            detail::write_outputs(ctx, tr, w);
            return kOk;
        }

        if (args.command == "closed-loop") {
            Scenario sc = cfg.scenario;
            if (sc.setpoint.empty())
                throw ConfigError("closed-loop requires a set-point profile in [scenario]");
            const Trace tr = run_closed_loop(cfg.params, cfg.loop, sc);
            w.field("mode", cfg.loop.mode == LoopMode::TwoDof ? "2dof" : "1dof");
            w.field("kp", cfg.loop.pi.kp);
            w.field("ki", cfg.loop.pi.ki);
            // Metrics for the first set-point change, when there is one.
            if (sc.setpoint.points.size() > 1) {
                const double t0 = sc.setpoint.points[1].first;
                const double from = sc.setpoint.points[0].second;
                const double to = sc.setpoint.points[1].second;
                const double band = std::max(0.02 * std::abs(to - from), 0.1);
                const ResponseMetrics m =
                    response_metrics(detail::slice(tr, t0, sc.duration), t0, from, to, band);
                detail::emit_metrics(w, "setpoint_response", m);
            }
            detail::emit_params(w, cfg.params);
            w.end_object();
            detail::write_outputs(ctx, tr, w);
            out << "closed-loop run complete (" << tr.size() << " samples)\n";
            return kOk;
        }

        if (args.command == "calibrate") {
            std::vector<CalibrationTarget> targets = args.targets;
            if (targets.empty()) targets.push_back({1.55, 0.0, 151.3});
            const CalibrationResult r = calibrate(cfg.params, targets);
            w.field("residual_K", r.residual);
            w.field("iterations", r.iterations);
            detail::emit_params(w, r.params);
            w.end_object();
            ParsedConfig out_cfg = cfg;
            out_cfg.params = r.params;
            write_file((ctx.out / "calibrated.ini").string(), serialize_config(out_cfg));
            write_file((ctx.out / "summary.json").string(), w.str() + "\n");
            out << "calibrated: residual " << r.residual << " K after " << r.iterations
                << " evaluations -> " << (ctx.out / "calibrated.ini").string() << "\n";
            return kOk;
        }

        // compare-controllers
        const CompareScenario shape;
        const Scenario sc = shape.build();
        struct Case {
            const char* name;
            LoopMode mode;
            double kp;
            double a;
        };
        const Case cases[] = {
            {"1dof_kp7.5", LoopMode::OneDof, 7.5, 0.0},
            {"1dof_kp15", LoopMode::OneDof, 15.0, 0.0},
            {"2dof_kp10", LoopMode::TwoDof, 10.0, 0.98},
        };
        out << "case          sp_peak_t  sp_overshoot  sp_settle  d_peak_t  d_peak  d_settle\n";
        std::string rows;
        for (const Case& c : cases) {
            LoopConfig loop = cfg.loop;
            loop.mode = c.mode;
            loop.pi.kp = c.kp;
            loop.pi.ki = 0.3;
            loop.filter.a = c.a;
            const Trace tr = run_closed_loop(cfg.params, loop, sc);
            const ResponseMetrics sp_m =
                response_metrics(detail::slice(tr, shape.t_step, shape.t_pulse), shape.t_step,
                                 shape.sp_high, shape.sp_low, shape.sp_band());
            const ResponseMetrics d_m =
                response_metrics(detail::slice(tr, shape.t_pulse, shape.duration), shape.t_pulse,
                                 shape.sp_low, shape.sp_low, 0.1);

            const std::filesystem::path case_dir = ctx.out / c.name;
            std::filesystem::create_directories(case_dir);
            JsonWriter cw;
            cw.begin_object();
            cw.field("command", ctx.command_line);
            cw.field("config_hash", ctx.config_hash);
            cw.field("case", c.name);
            cw.field("kp", c.kp);
            cw.field("ki", 0.3);
            cw.field("filter_a", c.a);
            detail::emit_metrics(cw, "setpoint_response", sp_m);
            detail::emit_metrics(cw, "disturbance_response", d_m);
            cw.end_object();
            write_file((case_dir / "trace.csv").string(), trace_to_csv(tr));
            write_file((case_dir / "summary.json").string(), cw.str() + "\n");

            JsonWriter rw;
            rw.begin_object();
            rw.field("case", c.name);
            detail::emit_metrics(rw, "setpoint_response", sp_m);
            detail::emit_metrics(rw, "disturbance_response", d_m);
            rw.end_object();
            rows += (rows.empty() ? "" : ", ") + rw.str();

            char line[160];
            std::snprintf(line, sizeof line, "%-12s %9.1f %13.3f %10.1f %9.1f %7.3f %9.1f\n",
                          c.name, sp_m.peak_time, sp_m.peak_overshoot, sp_m.settling_time,
                          d_m.peak_time, d_m.peak_overshoot, d_m.settling_time);
            out << line;
            if (std::string(c.name) == "2dof_kp10") {
                // Primary trace for the top-level outputs.
                write_file((ctx.out / "trace.csv").string(), trace_to_csv(tr));
            }
        }
        w.begin_array("cases");
        w.raw_elements(rows);
        w.end_array();
        detail::emit_params(w, cfg.params);
        w.end_object();
        write_file((ctx.out / "summary.json").string(), w.str() + "\n");
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const CalibrationFailed& e) {
        err << "calibration failed: " << e.what() << "\n";
        return kCalibrationFailure;
    } catch (const ConvergenceFailure& e) {
        err << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const SimFault& e) {
        err << "plant fault: " << e.what() << "\n";
        return kPlantFault;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace cryo::cli
