#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confidence.hpp"
#include "config.hpp"
#include "controller.hpp"

namespace stirlab::harness {

using controller::Outcome;
using fluidsim::Density;
using trajectory::TrajectoryKind;

enum class SpeedMode { Constant, Adaptive };
std::string_view to_string(SpeedMode m);
SpeedMode parse_speed_mode(std::string_view name);

struct FrameRow {
    double t = 0.0;
    int gt = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    long error = 0;
    double confidence = 0.0;
    std::optional<double> predicted;
    double speed = 0.0;  // 0 while the stick is out of the water
    perception::FeatureVector features;
};

/// One row of trials.csv; everything aggregation needs.
struct TrialSummary {
    int id = 0;
    Density density = Density::Low;
    TrajectoryKind trajectory = TrajectoryKind::Circle;
    SpeedMode mode = SpeedMode::Constant;
    int cell_trial = 0;  // index within its (density, trajectory, mode) cell
    std::uint64_t seed = 0;
    double duration = 0.0;  // stir start to stir stop, s
    Outcome outcome = Outcome::Completed;
    int n_frames = 0;
    double mean_error = 0.0;
    double mean_confidence = 0.0;
    double final_error = 0.0;
    double final_confidence = 0.0;
};

struct TrialResult {
    TrialSummary summary;
    std::vector<FrameRow> frames;
};

struct DurationSummary {
    double mean = 0.0;
    double std = 0.0;  // population
};

/// Mean and population standard deviation. Throws ParameterError when empty.
DurationSummary summarize(std::span<const double> values);

/// Per-trial stream seed; fixed function of the master seed and the cell.
std::uint64_t trial_seed(std::uint64_t master, Density density, TrajectoryKind kind, SpeedMode mode, int cell_trial,
                         bool selection);

TrialResult run_selection_trial(const ExperimentConfig& cfg, Density density, TrajectoryKind kind, int cell_trial,
                                int id);

TrialResult run_speed_trial(const ExperimentConfig& cfg, const confidence::Coefficients& coef, Density density,
                            SpeedMode mode, int cell_trial, int id);

struct Table1Row {
    std::optional<Density> density;  // nullopt marks the overall row
    TrajectoryKind trajectory = TrajectoryKind::Circle;
    int n_trials = 0;
    double mean_error = 0.0;
    double mean_confidence = 0.0;
};

struct SelectionTable {
    std::vector<Table1Row> rows;
    TrajectoryKind best_by_error = TrajectoryKind::Circle;
    TrajectoryKind best_by_confidence = TrajectoryKind::Circle;
};

/// Cell means over trials; overall rows are the unweighted mean of the
/// per-density means. Cell order follows first appearance in `trials`.
SelectionTable aggregate_selection(std::span<const TrialSummary> trials);

struct Table2Row {
    Density density = Density::Low;
    SpeedMode mode = SpeedMode::Constant;
    int n_trials = 0;
    int n_included = 0;
    int n_failed = 0;
    int n_timed_out = 0;
    std::optional<DurationSummary> duration;
};

/// Timing aggregates per (density, mode). Failed initiations are left out
/// unless `include_failed` is set.
std::vector<Table2Row> aggregate_speed(std::span<const TrialSummary> trials, bool include_failed = false);

struct SelectionReport {
    std::vector<TrialResult> trials;
    SelectionTable table;
};

struct SpeedReport {
    std::vector<TrialResult> trials;
    std::vector<Table2Row> table;
};

SelectionReport run_trajectory_selection(const ExperimentConfig& cfg);

/// Throws ConfigError when no coefficients are supplied.
SpeedReport run_speed_comparison(const ExperimentConfig& cfg, const confidence::Coefficients* coef);

/// trials.csv, frames.csv, table1.csv.
void write_selection_report(const SelectionReport& report, const ExperimentConfig& cfg,
                            const std::filesystem::path& dir);

/// trials.csv, frames.csv, table2.csv, curves_<density>.csv.
void write_speed_report(const SpeedReport& report, const ExperimentConfig& cfg, const std::filesystem::path& dir);

struct TrialsFile {
    std::string comments;  // leading '#' lines, verbatim
    std::vector<TrialSummary> trials;
};

TrialsFile read_trials_csv(const std::filesystem::path& path);

/// Rebuilds the aggregate tables of an earlier run from its trials.csv.
ExperimentMode reaggregate(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir);

struct ReplayRow {
    int frame = 0;
    double t = 0.0;
    double confidence = 0.0;
    std::optional<double> delta_c;
    double speed = 0.0;
    bool stop = false;
};

struct ReplayResult {
    std::vector<ReplayRow> rows;
    controller::Status status = controller::Status::Running;
};

/// Feeds a recorded "frame,t_s,C[,...]" stream through a fresh controller.
ReplayResult replay(const controller::ControllerConfig& cfg, std::istream& in);
void write_replay(std::ostream& os, const ReplayResult& result);

}  // namespace stirlab::harness
