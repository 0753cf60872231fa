#pragma once

#include <cstdint>
#include <optional>

#include "fluidsim.hpp"
#include "perception.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

namespace stirlab {

/// Every physical knob of one simulated trap.
struct SimParams {
    trajectory::ArenaSpec arena;
    trajectory::GeneratorOptions generator;
    fluidsim::TemplateSpec tmpl;
    fluidsim::FlowParams flow;
    perception::DetectorParams detector;
    double v_max = 20.0;  // cm/s at speed scale 1
    double dt = 0.02;     // integration step, s

    void check() const;
};

struct FrameRecord {
    double t = 0.0;
    int gt = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    long error = 0;
    double confidence = 0.0;
    double agitation = 0.0;
    perception::FeatureVector features;
};

/// One trap, one stirring path, one rng family. The stick is in the water only
/// between start_stirring() and stop_stirring().
class StirSession {
public:
    StirSession(const SimParams& params, fluidsim::Density density, trajectory::TrajectoryKind kind,
                std::uint64_t trial_seed);

    /// Integrates up to time t (no-op if already there).
    void advance_to(double t);

    void start_stirring(double speed_scale);
    void set_speed(double speed_scale);
    void stop_stirring();
    bool stirring() const { return stirring_; }
    double speed() const { return speed_; }

    FrameRecord capture();

    const fluidsim::Scene& scene() const { return scene_; }
    double time() const { return static_cast<double>(steps_) * params_.dt; }

private:
    SimParams params_;
    fluidsim::Scene scene_;
    trajectory::LoopedPath path_;
    Rng detect_rng_;
    std::int64_t steps_ = 0;
    bool stirring_ = false;
    double speed_ = 0.0;
    double arc_ = 0.0;
};

}  // namespace stirlab
