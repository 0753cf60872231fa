#include "stirlab/stirlab.h"

#include <algorithm>
#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <string>

#include "confidence.hpp"
#include "config.hpp"
#include "controller.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "trajectory.hpp"

struct stirlab_config {
    stirlab::ExperimentConfig cfg;
};

struct stirlab_coefficients {
    stirlab::confidence::Coefficients coef;
};

struct stirlab_controller {
    stirlab::controller::Controller ctl;
};

namespace {

thread_local std::string g_last_error;

stirlab_status fail(stirlab_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <class F>
stirlab_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return STIRLAB_OK;
    } catch (const stirlab::ParameterError& e) {
        return fail(STIRLAB_E_PARAMETER, e.what());
    } catch (const stirlab::GenerationError& e) {
        return fail(STIRLAB_E_GENERATION, e.what());
    } catch (const stirlab::InitError& e) {
        return fail(STIRLAB_E_INIT, e.what());
    } catch (const stirlab::FitError& e) {
        return fail(STIRLAB_E_FIT, e.what());
    } catch (const stirlab::StateError& e) {
        return fail(STIRLAB_E_STATE, e.what());
    } catch (const stirlab::ConfigError& e) {
        return fail(STIRLAB_E_CONFIG, e.what());
    } catch (const stirlab::FormatError& e) {
        return fail(STIRLAB_E_FORMAT, e.what());
    } catch (const stirlab::IoError& e) {
        return fail(STIRLAB_E_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(STIRLAB_E_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(STIRLAB_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(STIRLAB_E_INTERNAL, e.what());
    } catch (...) {
        return fail(STIRLAB_E_INTERNAL, "unknown error");
    }
}

void copy_out(const std::string& text, char* buf, std::size_t cap, std::size_t* needed) {
    if (needed != nullptr) *needed = text.size();
    if (buf == nullptr || cap == 0) return;
    const std::size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
}

#define STIRLAB_REQUIRE(p)                                                  \
    do {                                                                    \
        if ((p) == nullptr) return fail(STIRLAB_E_ARGUMENT, #p " is null"); \
    } while (0)

}  // namespace

extern "C" {

const char* stirlab_version(void) { return "1.0.0"; }

const char* stirlab_status_name(stirlab_status status) {
    switch (status) {
        case STIRLAB_OK: return "ok";
        case STIRLAB_E_ARGUMENT: return "argument error";
        case STIRLAB_E_PARAMETER: return "parameter error";
        case STIRLAB_E_GENERATION: return "generation error";
        case STIRLAB_E_INIT: return "initialisation error";
        case STIRLAB_E_FIT: return "fit error";
        case STIRLAB_E_STATE: return "state error";
        case STIRLAB_E_CONFIG: return "config error";
        case STIRLAB_E_FORMAT: return "format error";
        case STIRLAB_E_IO: return "i/o error";
        case STIRLAB_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* stirlab_last_error(void) { return g_last_error.c_str(); }

stirlab_status stirlab_config_new(stirlab_config** out) {
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = new stirlab_config{}; });
}

stirlab_status stirlab_config_load(const char* path, stirlab_config** out) {
    STIRLAB_REQUIRE(path);
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = new stirlab_config{stirlab::load_config(path)}; });
}

stirlab_status stirlab_config_set(stirlab_config* cfg, const char* key, const char* value) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(key);
    STIRLAB_REQUIRE(value);
    return guarded([&] {
        auto next = cfg->cfg;
        stirlab::set_config_value(next, key, value);
        next.validate();
        cfg->cfg = std::move(next);
    });
}

stirlab_status stirlab_config_get(const stirlab_config* cfg, const char* key, char* buf, size_t cap,
                                  size_t* needed) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(key);
    return guarded([&] { copy_out(stirlab::get_config_value(cfg->cfg, key), buf, cap, needed); });
}

stirlab_status stirlab_config_dump(const stirlab_config* cfg, char* buf, size_t cap, size_t* needed) {
    STIRLAB_REQUIRE(cfg);
    return guarded([&] { copy_out(stirlab::dump_config(cfg->cfg), buf, cap, needed); });
}

void stirlab_config_free(stirlab_config* cfg) { delete cfg; }

stirlab_status stirlab_write_trajectory(const stirlab_config* cfg, const char* kind, uint64_t seed,
                                        double speed_scale, double dt, const char* path) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(kind);
    STIRLAB_REQUIRE(path);
    return guarded([&] {
        namespace tj = stirlab::trajectory;
        const auto& sim = cfg->cfg.sim;
        const auto k = tj::parse_kind(kind);
        const auto timed = tj::time_parameterize(tj::generate(k, sim.arena, seed, sim.generator), speed_scale,
                                                 sim.v_max, dt);
        if (std::strcmp(path, "-") == 0) {
            tj::write_timed_path(std::cout, timed, k, seed);
            std::cout.flush();
            return;
        }
        const std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os) throw stirlab::IoError("cannot write " + p.string());
        tj::write_timed_path(os, timed, k, seed);
        if (!os.flush()) throw stirlab::IoError("write failed: " + p.string());
    });
}

stirlab_status stirlab_calibrate(const stirlab_config* cfg, uint64_t seed, stirlab_coefficients** out,
                                 double* heldout_r2) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(out);
    return guarded([&] {
        auto report = stirlab::confidence::calibrate(cfg->cfg.sim, cfg->cfg.calibration_frames, seed);
        if (heldout_r2 != nullptr) *heldout_r2 = report.heldout_r2;
        *out = new stirlab_coefficients{std::move(report.coefficients)};
    });
}

stirlab_status stirlab_coefficients_load(const char* path, stirlab_coefficients** out) {
    STIRLAB_REQUIRE(path);
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = new stirlab_coefficients{stirlab::confidence::load(path)}; });
}

stirlab_status stirlab_coefficients_save(const stirlab_coefficients* coef, const char* path) {
    STIRLAB_REQUIRE(coef);
    STIRLAB_REQUIRE(path);
    return guarded([&] { stirlab::confidence::save(coef->coef, path); });
}

stirlab_status stirlab_coefficients_get(const stirlab_coefficients* coef, double beta[STIRLAB_TERMS],
                                        double* residual_std) {
    STIRLAB_REQUIRE(coef);
    return guarded([&] {
        if (beta != nullptr) {
            for (std::size_t i = 0; i < STIRLAB_TERMS; ++i) beta[i] = coef->coef.beta[i];
        }
        if (residual_std != nullptr) *residual_std = coef->coef.fit_residual_std;
    });
}

stirlab_status stirlab_predict(const stirlab_coefficients* coef, const double x[STIRLAB_FEATURES], double* out) {
    STIRLAB_REQUIRE(coef);
    STIRLAB_REQUIRE(x);
    STIRLAB_REQUIRE(out);
    return guarded([&] {
        std::array<double, STIRLAB_FEATURES> v{};
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i];
        *out = stirlab::confidence::predict(coef->coef, stirlab::perception::FeatureVector::from_array(v));
    });
}

void stirlab_coefficients_free(stirlab_coefficients* coef) { delete coef; }

stirlab_status stirlab_counting_error(long gt_real, long tp, long* out) {
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = stirlab::perception::counting_error(gt_real, tp); });
}

stirlab_status stirlab_counting_confidence(long tp, long fp, long fn, double* out) {
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = stirlab::perception::counting_confidence(tp, fp, fn); });
}

stirlab_status stirlab_run_selection(const stirlab_config* cfg, const char* out_dir) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(out_dir);
    return guarded([&] {
        const auto report = stirlab::harness::run_trajectory_selection(cfg->cfg);
        stirlab::harness::write_selection_report(report, cfg->cfg, out_dir);
    });
}

stirlab_status stirlab_run_speed(const stirlab_config* cfg, const stirlab_coefficients* coef, const char* out_dir) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(out_dir);
    return guarded([&] {
        const auto report = stirlab::harness::run_speed_comparison(cfg->cfg, coef ? &coef->coef : nullptr);
        stirlab::harness::write_speed_report(report, cfg->cfg, out_dir);
    });
}

stirlab_status stirlab_replay_file(const stirlab_config* cfg, const char* in_path, const char* out_path) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(in_path);
    STIRLAB_REQUIRE(out_path);
    return guarded([&] {
        std::ifstream in(in_path);
        if (!in) throw stirlab::IoError(std::string("cannot read ") + in_path);
        const auto result = stirlab::harness::replay(cfg->cfg.controller, in);
        if (std::strcmp(out_path, "-") == 0) {
            stirlab::harness::write_replay(std::cout, result);
            std::cout.flush();
            return;
        }
        const std::filesystem::path p(out_path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p);
        if (!os) throw stirlab::IoError("cannot write " + p.string());
        stirlab::harness::write_replay(os, result);
        if (!os.flush()) throw stirlab::IoError("write failed: " + p.string());
    });
}

stirlab_status stirlab_report(const char* in_dir, const char* out_dir) {
    STIRLAB_REQUIRE(in_dir);
    STIRLAB_REQUIRE(out_dir);
    return guarded([&] { stirlab::harness::reaggregate(in_dir, out_dir); });
}

stirlab_status stirlab_controller_new(const stirlab_config* cfg, stirlab_controller** out) {
    STIRLAB_REQUIRE(cfg);
    STIRLAB_REQUIRE(out);
    return guarded([&] { *out = new stirlab_controller{stirlab::controller::Controller(cfg->cfg.controller)}; });
}

stirlab_status stirlab_controller_step(stirlab_controller* ctl, double confidence, int* stop, double* speed) {
    STIRLAB_REQUIRE(ctl);
    return guarded([&] {
        const auto d = ctl->ctl.step(confidence);
        if (stop != nullptr) *stop = d.stop ? 1 : 0;
        if (speed != nullptr) *speed = d.speed;
    });
}

stirlab_status stirlab_controller_outcome(const stirlab_controller* ctl, stirlab_outcome* out) {
    STIRLAB_REQUIRE(ctl);
    STIRLAB_REQUIRE(out);
    return guarded([&] {
        switch (stirlab::controller::classify_outcome(ctl->ctl)) {
            case stirlab::controller::Outcome::Completed: *out = STIRLAB_COMPLETED; break;
            case stirlab::controller::Outcome::FailedInitiation: *out = STIRLAB_FAILED_INITIATION; break;
            case stirlab::controller::Outcome::TimedOut: *out = STIRLAB_TIMED_OUT; break;
        }
    });
}

void stirlab_controller_free(stirlab_controller* ctl) { delete ctl; }

}  // extern "C"
