#include "session.hpp"

#include <cmath>

#include "error.hpp"

namespace stirlab {

void SimParams::check() const {
    arena.check();
    flow.check();
    detector.check();
    if (!(v_max > 0.0)) throw ParameterError("v_max must be positive");
    if (!(dt > 0.0 && dt <= 0.1)) throw ParameterError("sim dt must be in (0, 0.1]");
    if (!(generator.spacing > 0.0)) throw ParameterError("trajectory spacing must be positive");
}

StirSession::StirSession(const SimParams& params, fluidsim::Density density, trajectory::TrajectoryKind kind,
                         std::uint64_t trial_seed)
    : params_(params),
      scene_(fluidsim::init_scene(density, params.tmpl, params.arena, derive_seed(trial_seed, {1}))),
      path_(trajectory::generate(kind, params.arena, derive_seed(trial_seed, {3}), params.generator), params.arena),
      detect_rng_(derive_seed(trial_seed, {2})) {}

void StirSession::advance_to(double t) {
    const auto target = static_cast<std::int64_t>(std::llround(t / params_.dt));
    while (steps_ < target) {
        std::optional<fluidsim::StickState> stick;
        if (stirring_) {
            const auto pose = path_.at(arc_);
            const double v = speed_ * params_.v_max;
            stick = fluidsim::StickState{pose.position, pose.tangent * v, params_.arena.stick_radius};
            arc_ += v * params_.dt;
        }
        fluidsim::step(scene_, stick, params_.flow, params_.dt);
        ++steps_;
        scene_.time = time();
    }
}

void StirSession::start_stirring(double speed_scale) {
    set_speed(speed_scale);
    stirring_ = true;
}

void StirSession::set_speed(double speed_scale) {
    if (!(speed_scale > 0.0 && speed_scale <= 1.0)) throw ParameterError("speed scale must be in (0, 1]");
    speed_ = speed_scale;
}

void StirSession::stop_stirring() { stirring_ = false; }

FrameRecord StirSession::capture() {
    FrameRecord rec;
    rec.t = time();
    const auto vis = perception::compute_visibility(scene_);
    const auto det = perception::simulate_detection(scene_, vis, params_.detector, scene_.agitation, detect_rng_);
    rec.gt = static_cast<int>(scene_.pests.size());
    rec.tp = det.tp;
    rec.fp = det.fp;
    rec.fn = det.fn;
    rec.error = perception::counting_error(rec.gt, rec.tp);
    rec.confidence = perception::counting_confidence(det.tp, det.fp, det.fn);
    rec.agitation = scene_.agitation;
    rec.features = perception::extract_features(scene_, vis, det, scene_.agitation, params_.detector);
    return rec;
}

}  // namespace stirlab
