#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace stirlab::controller {

struct ControllerConfig {
    double s0 = 0.5;
    double c_th = 0.01;
    int k = 3;
    double s_min = 0.05;
    double s_max = 1.0;
    double frame_period = 2.0;  // s
    double max_duration = 120.0;
    // When false the speed stays at s0 and only the stop rule runs; used for
    // constant-speed trials timed by the same rule.
    bool adapt_speed = true;

    void check() const;
};

enum class Status { Running, Stopped, FailedInitiation, TimedOut };
enum class Outcome { Completed, FailedInitiation, TimedOut };

std::string_view to_string(Status s);
std::string_view to_string(Outcome o);
Outcome parse_outcome(std::string_view name);

/// Mean of the k-1 consecutive differences of the window, oldest first.
double avg_change_rate(std::span<const double> window, int k);

double update_speed(double s_prev, double delta_c, const ControllerConfig& cfg);

struct Decision {
    bool stop = false;
    double speed = 0.0;                  // speed to stir at until the next frame
    std::optional<double> delta_c;       // absent until k frames are in
};

struct HistoryEntry {
    int frame = 0;
    double confidence = 0.0;
};

/// Confidence-driven speed loop. Frame n (1-based) is the n-th confidence fed
/// in; frame 1 is taken when stirring starts, so frame n lies (n - 1) frame
/// periods after the start.
class Controller {
public:
    explicit Controller(const ControllerConfig& cfg);

    Decision step(double confidence);

    Status status() const { return status_; }
    double speed() const { return speed_; }
    int frames_seen() const { return static_cast<int>(history_.size()); }
    std::optional<int> stop_frame() const { return stop_frame_; }
    const std::vector<HistoryEntry>& history() const { return history_; }
    const ControllerConfig& config() const { return cfg_; }

private:
    ControllerConfig cfg_;
    double speed_;
    std::vector<HistoryEntry> history_;
    Status status_ = Status::Running;
    std::optional<int> stop_frame_;
};

/// Throws StateError while the controller is still running.
Outcome classify_outcome(const Controller& ctl);

}  // namespace stirlab::controller
