// Command-line front end over the stirlab C API.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stirlab/stirlab.h"

namespace {

struct Failure {
    std::string message;
};

void check(stirlab_status status, const std::string& what) {
    if (status == STIRLAB_OK) return;
    std::string msg = stirlab_last_error();
    if (msg.empty()) msg = stirlab_status_name(status);
    throw Failure{what + ": " + msg};
}

struct ConfigHandle {
    stirlab_config* p = nullptr;
    ~ConfigHandle() { stirlab_config_free(p); }
};

struct CoefHandle {
    stirlab_coefficients* p = nullptr;
    ~CoefHandle() { stirlab_coefficients_free(p); }
};

struct Globals {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out = "out";
    bool quiet = false;
    std::vector<std::string> overrides;
};

void open_config(const Globals& g, ConfigHandle& cfg) {
    if (g.config.empty()) {
        check(stirlab_config_new(&cfg.p), "config");
    } else {
        check(stirlab_config_load(g.config.c_str(), &cfg.p), "config");
    }
    for (const auto& kv : g.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Failure{"--set expects key=value, got '" + kv + "'"};
        check(stirlab_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set " + kv);
    }
    if (g.seed_set) check(stirlab_config_set(cfg.p, "experiment.seed", std::to_string(g.seed).c_str()), "--seed");
    check(stirlab_config_set(cfg.p, "experiment.output_dir", g.out.c_str()), "--out");
}

std::uint64_t effective_seed(const Globals& g, const ConfigHandle& cfg) {
    if (g.seed_set) return g.seed;
    char buf[32];
    check(stirlab_config_get(cfg.p, "experiment.seed", buf, sizeof buf, nullptr), "config");
    return std::stoull(buf);
}

void say(const Globals& g, const std::string& line) {
    if (!g.quiet) std::cout << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stirlab: stirring trajectory and adaptive-speed experiments on a simulated water trap"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Config file of `section.key = value` lines");
    app.add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { g.seed = s; g.seed_set = true; }, "Master seed");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Only report errors");
    app.add_option("--set", g.overrides, "Override one config key, key=value")->take_all();

    auto* gen = app.add_subcommand("gen-traj", "Write the timed waypoints of one trajectory");
    std::string kind = "four_small_circles";
    double speed = 0.5;
    double dt = 0.1;
    gen->add_option("--kind", kind, "circle, square, triangle, spiral, four_small_circles, random_lines")
        ->capture_default_str();
    gen->add_option("--speed", speed, "Speed scale in (0, 1]")->capture_default_str();
    gen->add_option("--dt", dt, "Sample period, s")->capture_default_str();

    auto* cal = app.add_subcommand("calibrate", "Fit the confidence model on simulated frames");
    std::string coef_out;
    cal->add_option("--coef", coef_out, "Coefficient file to write (default <out>/coefficients.txt)");

    auto* run = app.add_subcommand("run", "Run an experiment");
    run->require_subcommand(1);
    auto* run_select = run->add_subcommand("select", "Trajectory selection sweep");
    auto* run_speed = run->add_subcommand("speed", "Constant against adaptive speed");
    std::string coef_in;
    run_speed->add_option("--coef", coef_in, "Coefficient file (default <out>/coefficients.txt)");

    auto* rep = app.add_subcommand("replay", "Feed a recorded confidence trace through the controller");
    std::string trace;
    std::string replay_out = "-";
    rep->add_option("trace", trace, "CSV with frame,t_s,C columns")->required();
    rep->add_option("--output", replay_out, "Decision trace to write, '-' for stdout")->capture_default_str();

    auto* report = app.add_subcommand("report", "Re-aggregate the trials.csv of an earlier run");
    std::string report_in;
    report->add_option("--in", report_in, "Directory holding trials.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "stirlab: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        ConfigHandle cfg;
        open_config(g, cfg);
        const std::filesystem::path out(g.out);

        if (*gen) {
            const auto seed = effective_seed(g, cfg);
            const auto path = (out / ("traj_" + kind + "_" + std::to_string(seed) + ".txt")).string();
            check(stirlab_write_trajectory(cfg.p, kind.c_str(), seed, speed, dt, path.c_str()), "gen-traj");
            say(g, "wrote " + path);
        } else if (*cal) {
            const auto path = coef_out.empty() ? (out / "coefficients.txt").string() : coef_out;
            CoefHandle coef;
            double r2 = 0.0;
            check(stirlab_calibrate(cfg.p, effective_seed(g, cfg), &coef.p, &r2), "calibrate");
            check(stirlab_coefficients_save(coef.p, path.c_str()), "calibrate");
            say(g, "wrote " + path + " (held-out R^2 " + std::to_string(r2) + ")");
        } else if (*run_select) {
            check(stirlab_run_selection(cfg.p, g.out.c_str()), "run select");
            say(g, "wrote " + (out / "table1.csv").string());
        } else if (*run_speed) {
            const auto path = coef_in.empty() ? out / "coefficients.txt" : std::filesystem::path(coef_in);
            if (!std::filesystem::exists(path)) {
                throw Failure{"run speed: no coefficient file at " + path.string() + "; run `calibrate` first"};
            }
            CoefHandle coef;
            check(stirlab_coefficients_load(path.string().c_str(), &coef.p), "run speed");
            check(stirlab_run_speed(cfg.p, coef.p, g.out.c_str()), "run speed");
            say(g, "wrote " + (out / "table2.csv").string());
        } else if (*rep) {
            check(stirlab_replay_file(cfg.p, trace.c_str(), replay_out.c_str()), "replay");
        } else if (*report) {
            check(stirlab_report(report_in.c_str(), g.out.c_str()), "report");
            say(g, "wrote tables to " + g.out);
        }
    } catch (const Failure& f) {
        std::cerr << "stirlab: " << f.message << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stirlab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
