#include "controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace stirlab::controller {

void ControllerConfig::check() const {
    if (!(s_min > 0.0 && s_min <= s0 && s0 <= s_max && s_max <= 1.0)) {
        throw ParameterError("controller: require 0 < s_min <= s0 <= s_max <= 1");
    }
    if (!(c_th > 0.0)) throw ParameterError("controller.c_th must be positive");
    if (k < 2) throw ParameterError("controller.k must be at least 2");
    if (!(frame_period > 0.0)) throw ParameterError("controller.frame_period must be positive");
    if (!(max_duration > 0.0)) throw ParameterError("controller.max_duration must be positive");
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Running: return "running";
        case Status::Stopped: return "stopped";
        case Status::FailedInitiation: return "failed_initiation";
        case Status::TimedOut: return "timed_out";
    }
    return "unknown";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Completed: return "completed";
        case Outcome::FailedInitiation: return "failed_initiation";
        case Outcome::TimedOut: return "timed_out";
    }
    return "unknown";
}

Outcome parse_outcome(std::string_view name) {
    if (name == "completed") return Outcome::Completed;
    if (name == "failed_initiation") return Outcome::FailedInitiation;
    if (name == "timed_out") return Outcome::TimedOut;
    throw FormatError("unknown outcome '" + std::string(name) + "'");
}

double avg_change_rate(std::span<const double> window, int k) {
    if (k < 2) throw ParameterError("avg_change_rate: k must be at least 2");
    if (window.size() < static_cast<std::size_t>(k)) {
        throw StateError("avg_change_rate: need " + std::to_string(k) + " confidences, have " +
                         std::to_string(window.size()));
    }
    const auto recent = window.last(static_cast<std::size_t>(k));
    return (recent.back() - recent.front()) / static_cast<double>(k - 1);
}

double update_speed(double s_prev, double delta_c, const ControllerConfig& cfg) {
    return std::clamp(s_prev + delta_c, cfg.s_min, cfg.s_max);
}

Controller::Controller(const ControllerConfig& cfg) : cfg_(cfg), speed_(cfg.s0) { cfg_.check(); }

Decision Controller::step(double confidence) {
    if (status_ != Status::Running) throw StateError("controller already stopped");
    if (!std::isfinite(confidence)) throw ParameterError("controller: confidence must be finite");

    const int frame = frames_seen() + 1;
    history_.push_back({frame, confidence});

    Decision d;
    d.speed = speed_;
    if (frame >= cfg_.k) {
        std::vector<double> window;
        window.reserve(static_cast<std::size_t>(cfg_.k));
        for (auto it = history_.end() - cfg_.k; it != history_.end(); ++it) window.push_back(it->confidence);
        const double dc = avg_change_rate(window, cfg_.k);
        d.delta_c = dc;
        if (std::abs(dc) > cfg_.c_th) {
            if (cfg_.adapt_speed) speed_ = update_speed(speed_, dc, cfg_);
            d.speed = speed_;
        } else {
            status_ = frame == cfg_.k ? Status::FailedInitiation : Status::Stopped;
            stop_frame_ = frame;
            d.stop = true;
            return d;
        }
    }
    if (static_cast<double>(frame) * cfg_.frame_period >= cfg_.max_duration) {
        status_ = Status::TimedOut;
        stop_frame_ = frame;
        d.stop = true;
    }
    return d;
}

Outcome classify_outcome(const Controller& ctl) {
    switch (ctl.status()) {
        case Status::Running: throw StateError("classify_outcome: controller is still running");
        case Status::Stopped: return Outcome::Completed;
        case Status::FailedInitiation: return Outcome::FailedInitiation;
        case Status::TimedOut: return Outcome::TimedOut;
    }
    return Outcome::Completed;
}

}  // namespace stirlab::controller
