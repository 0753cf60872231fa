#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "error.hpp"
#include "numfmt.hpp"

namespace stirlab {

namespace {

struct Field {
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    bool affects_results = true;
};

template <typename Access>
Field real_field(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) { access(c) = parse_double(v, "value"); },
            [access](const ExperimentConfig& c) { return format_double(access(c)); }};
}

template <typename Int, typename Access>
Field int_field(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) { access(c) = parse_integer<Int>(v, "value"); },
            [access](const ExperimentConfig& c) { return std::to_string(access(c)); }};
}

std::string join_densities(const std::vector<fluidsim::Density>& ds) {
    std::string out;
    for (auto d : ds) out += (out.empty() ? "" : ",") + std::string(fluidsim::to_string(d));
    return out;
}

std::string join_kinds(const std::vector<trajectory::TrajectoryKind>& ks) {
    std::string out;
    for (auto k : ks) out += (out.empty() ? "" : ",") + std::string(trajectory::to_string(k));
    return out;
}

const std::map<std::string, Field, std::less<>>& registry() {
    static const auto fields = [] {
        using C = ExperimentConfig;
        std::map<std::string, Field, std::less<>> f;
        f["experiment.mode"] = {
            [](C& c, std::string_view v) {
                v = trim(v);
                if (v == "select" || v == "trajectory_selection") c.mode = ExperimentMode::TrajectorySelection;
                else if (v == "speed" || v == "speed_comparison") c.mode = ExperimentMode::SpeedComparison;
                else throw FormatError("expected select or speed, got '" + std::string(v) + "'");
            },
            [](const C& c) { return std::string(to_string(c.mode)); }};
        f["experiment.densities"] = {
            [](C& c, std::string_view v) {
                c.densities.clear();
                for (auto part : split(v, ',')) c.densities.push_back(fluidsim::parse_density(part));
            },
            [](const C& c) { return join_densities(c.densities); }};
        f["experiment.trajectories"] = {
            [](C& c, std::string_view v) {
                c.trajectories.clear();
                for (auto part : split(v, ',')) c.trajectories.push_back(trajectory::parse_kind(part));
            },
            [](const C& c) { return join_kinds(c.trajectories); }};
        f["experiment.trials_per_cell"] = int_field<int>([](auto& c) -> auto& { return c.trials_per_cell; });
        f["experiment.seed"] = int_field<std::uint64_t>([](auto& c) -> auto& { return c.seed; });
        f["experiment.output_dir"] = {[](C& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                                      [](const C& c) { return c.output_dir; }, false};
        f["experiment.threads"] = int_field<int>([](auto& c) -> auto& { return c.threads; });
        f["experiment.threads"].affects_results = false;

        f["arena.trap_radius"] = real_field([](auto& c) -> auto& { return c.sim.arena.trap_radius; });
        f["arena.column_radius"] = real_field([](auto& c) -> auto& { return c.sim.arena.column_radius; });
        f["arena.stick_radius"] = real_field([](auto& c) -> auto& { return c.sim.arena.stick_radius; });
        f["arena.reference_radius"] = real_field([](auto& c) -> auto& { return c.sim.arena.reference_radius; });

        f["trajectory.v_max"] = real_field([](auto& c) -> auto& { return c.sim.v_max; });
        f["trajectory.spacing"] = real_field([](auto& c) -> auto& { return c.sim.generator.spacing; });
        f["trajectory.n_lines"] = int_field<int>([](auto& c) -> auto& { return c.sim.generator.n_lines; });
        f["trajectory.retry_budget"] = int_field<int>([](auto& c) -> auto& { return c.sim.generator.retry_budget; });
        f["trajectory.small_circle_radius"] =
            real_field([](auto& c) -> auto& { return c.sim.generator.small_circle_radius; });

        f["template.n_regions"] = int_field<int>([](auto& c) -> auto& { return c.sim.tmpl.n_regions; });
        f["template.cell_radius"] = real_field([](auto& c) -> auto& { return c.sim.tmpl.cell_radius; });
        f["template.ring_radius"] = real_field([](auto& c) -> auto& { return c.sim.tmpl.ring_radius; });
        f["template.pest_radius"] = real_field([](auto& c) -> auto& { return c.sim.tmpl.pest_radius; });

        f["flow.kernel_sigma"] = real_field([](auto& c) -> auto& { return c.sim.flow.kernel_sigma; });
        f["flow.drag_coeff"] = real_field([](auto& c) -> auto& { return c.sim.flow.drag_coeff; });
        f["flow.swirl_coeff"] = real_field([](auto& c) -> auto& { return c.sim.flow.swirl_coeff; });
        f["flow.noise_scale"] = real_field([](auto& c) -> auto& { return c.sim.flow.noise_scale; });
        f["flow.agitation_gain"] = real_field([](auto& c) -> auto& { return c.sim.flow.agitation_gain; });
        f["flow.agitation_decay"] = real_field([](auto& c) -> auto& { return c.sim.flow.agitation_decay; });
        f["flow.dt"] = real_field([](auto& c) -> auto& { return c.sim.dt; });

        f["detector.p_detect_visible"] = real_field([](auto& c) -> auto& { return c.sim.detector.p_detect_visible; });
        f["detector.p_detect_partial"] = real_field([](auto& c) -> auto& { return c.sim.detector.p_detect_partial; });
        f["detector.fp_rate"] = real_field([](auto& c) -> auto& { return c.sim.detector.fp_rate; });
        f["detector.conf_alpha"] = real_field([](auto& c) -> auto& { return c.sim.detector.conf_alpha; });
        f["detector.conf_beta"] = real_field([](auto& c) -> auto& { return c.sim.detector.conf_beta; });
        f["detector.clarity_penalty"] = real_field([](auto& c) -> auto& { return c.sim.detector.clarity_penalty; });
        f["detector.count_normalizer"] = real_field([](auto& c) -> auto& { return c.sim.detector.count_normalizer; });

        f["controller.s0"] = real_field([](auto& c) -> auto& { return c.controller.s0; });
        f["controller.c_th"] = real_field([](auto& c) -> auto& { return c.controller.c_th; });
        f["controller.k"] = int_field<int>([](auto& c) -> auto& { return c.controller.k; });
        f["controller.s_min"] = real_field([](auto& c) -> auto& { return c.controller.s_min; });
        f["controller.s_max"] = real_field([](auto& c) -> auto& { return c.controller.s_max; });
        f["controller.frame_period"] = real_field([](auto& c) -> auto& { return c.controller.frame_period; });
        f["controller.max_duration"] = real_field([](auto& c) -> auto& { return c.controller.max_duration; });

        f["protocol.stir_start"] = real_field([](auto& c) -> auto& { return c.protocol.stir_start; });
        f["protocol.stir_stop"] = real_field([](auto& c) -> auto& { return c.protocol.stir_stop; });
        f["protocol.end"] = real_field([](auto& c) -> auto& { return c.protocol.end; });
        f["protocol.frame_period"] = real_field([](auto& c) -> auto& { return c.protocol.frame_period; });
        f["protocol.speed"] = real_field([](auto& c) -> auto& { return c.protocol.speed; });

        f["speed_comparison.constant_stop"] = {
            [](C& c, std::string_view v) {
                v = trim(v);
                if (v == "fixed_window") c.constant_stop = ConstantStop::FixedWindow;
                else if (v == "confidence_rule") c.constant_stop = ConstantStop::ConfidenceRule;
                else throw FormatError("expected fixed_window or confidence_rule, got '" + std::string(v) + "'");
            },
            [](const C& c) { return std::string(to_string(c.constant_stop)); }};
        f["speed_comparison.trajectory"] = {
            [](C& c, std::string_view v) { c.speed_trajectory = trajectory::parse_kind(v); },
            [](const C& c) { return std::string(trajectory::to_string(c.speed_trajectory)); }};

        f["calibration.n_frames"] = int_field<std::size_t>([](auto& c) -> auto& { return c.calibration_frames; });
        return f;
    }();
    return fields;
}

}  // namespace

std::string_view to_string(ExperimentMode m) {
    return m == ExperimentMode::TrajectorySelection ? "select" : "speed";
}

std::string_view to_string(ConstantStop c) {
    return c == ConstantStop::FixedWindow ? "fixed_window" : "confidence_rule";
}

void ExperimentConfig::validate() const {
    if (trials_per_cell < 1) throw ConfigError("experiment.trials_per_cell must be at least 1");
    if (densities.empty()) throw ConfigError("experiment.densities must not be empty");
    if (trajectories.empty()) throw ConfigError("experiment.trajectories must not be empty");
    if (threads < 0) throw ConfigError("experiment.threads must be non-negative");
    try {
        sim.check();
        controller.check();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(protocol.frame_period > 0.0)) throw ConfigError("protocol.frame_period must be positive");
    if (!(protocol.stir_start >= 0.0 && protocol.stir_start < protocol.stir_stop && protocol.stir_stop <= protocol.end)) {
        throw ConfigError("protocol: require 0 <= stir_start < stir_stop <= end");
    }
    if (!(protocol.speed > 0.0 && protocol.speed <= 1.0)) throw ConfigError("protocol.speed must be in (0, 1]");
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    const auto& reg = registry();
    const auto it = reg.find(key);
    if (it == reg.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    try {
        it->second.set(cfg, value);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, field] : registry()) k.push_back(name);
        return k;
    }();
    return keys;
}

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key) {
    const auto& reg = registry();
    const auto it = reg.find(key);
    if (it == reg.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    return it->second.get(cfg);
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'section.key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.find('.') == std::string_view::npos) throw ConfigError(where + ": key '" + std::string(key) + "' has no section");
        try {
            set_config_value(cfg, key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [name, field] : registry()) {
        if (!field.affects_results) continue;
        out += name + " = " + field.get(cfg) + "\n";
    }
    return out;
}

}  // namespace stirlab
