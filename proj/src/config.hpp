#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "controller.hpp"
#include "fluidsim.hpp"
#include "session.hpp"
#include "trajectory.hpp"

namespace stirlab {

enum class ExperimentMode { TrajectorySelection, SpeedComparison };
enum class ConstantStop { FixedWindow, ConfidenceRule };

/// Capture/stir timeline of one trial, seconds.
struct Protocol {
    double stir_start = 2.0;
    double stir_stop = 15.0;  // selection trials and fixed-window constant trials
    double end = 50.0;        // last selection frame
    double frame_period = 2.0;
    double speed = 0.5;       // constant stirring speed scale
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::TrajectorySelection;
    std::vector<fluidsim::Density> densities{fluidsim::Density::Low, fluidsim::Density::Medium,
                                             fluidsim::Density::High};
    std::vector<trajectory::TrajectoryKind> trajectories{trajectory::kAllKinds.begin(), trajectory::kAllKinds.end()};
    int trials_per_cell = 20;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    int threads = 0;  // 0 = hardware concurrency

    SimParams sim;
    controller::ControllerConfig controller;
    Protocol protocol;
    ConstantStop constant_stop = ConstantStop::ConfidenceRule;
    trajectory::TrajectoryKind speed_trajectory = trajectory::TrajectoryKind::FourSmallCircles;
    std::size_t calibration_frames = 5000;

    /// Throws ConfigError on any inconsistent value.
    void validate() const;
};

/// Sets one `section.key` from its text form. Unknown keys throw ConfigError.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// All known keys in a fixed order.
const std::vector<std::string>& config_keys();

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key);

/// Parses `section.key = value` lines; '#' starts a comment. `source` names the
/// input in diagnostics.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every result-affecting key as `key = value` lines (excludes output_dir and
/// threads, which never change results).
std::string dump_config(const ExperimentConfig& cfg);

std::string_view to_string(ExperimentMode m);
std::string_view to_string(ConstantStop c);

}  // namespace stirlab
