#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace stirlab::trajectory {

/// Trap geometry in centimetres, trap-centred frame. The exclusion radius is
/// always column + stick radius; it is derived rather than stored.
struct ArenaSpec {
    double trap_radius = 10.0;
    double column_radius = 2.0;
    double stick_radius = 1.0;
    double reference_radius = 8.0;

    double exclusion_radius() const { return column_radius + stick_radius; }

    /// Throws ParameterError unless 0 < exclusion < reference < trap.
    void check() const;
};

enum class TrajectoryKind { Circle, Square, Triangle, Spiral, FourSmallCircles, RandomLines };

inline constexpr std::array<TrajectoryKind, 6> kAllKinds = {
    TrajectoryKind::Circle, TrajectoryKind::Square, TrajectoryKind::Triangle,
    TrajectoryKind::Spiral, TrajectoryKind::FourSmallCircles, TrajectoryKind::RandomLines};

std::string_view to_string(TrajectoryKind kind);
/// Accepts the snake_case names produced by to_string. Throws ParameterError.
TrajectoryKind parse_kind(std::string_view name);

struct GeneratorOptions {
    double spacing = 0.1;         // arc-length spacing of waypoints, cm
    int n_lines = 8;              // RandomLines chord count
    int retry_budget = 10'000;    // RandomLines rejection budget per chord
    double small_circle_radius = 1.0;
};

struct Path {
    std::vector<Vec2> waypoints;
    TrajectoryKind kind = TrajectoryKind::Circle;
    bool closed = false;  // last waypoint coincides with the first
};

Path generate(TrajectoryKind kind, const ArenaSpec& arena, std::uint64_t seed,
              const GeneratorOptions& options = {});

double path_length(const Path& path);

/// Signed shoelace area of the waypoint polygon; negative for clockwise loops.
double signed_area(const Path& path);

struct ValidationReport {
    double min_center_distance = 0.0;
    double max_center_distance = 0.0;
    bool violation = false;
};

/// Minimum distance of any path point (segment interiors included) to the
/// trap centre, flagged if it dips below the exclusion radius.
ValidationReport validate(const Path& path, const ArenaSpec& arena);

struct TimedSample {
    Vec2 position;
    double t = 0.0;
    double s = 0.0;  // arc length from the path start
};

struct TimedPath {
    std::vector<TimedSample> samples;
    double speed_scale = 0.0;
    double v_max = 0.0;
};

/// One traversal of the path at constant speed speed_scale * v_max, sampled
/// every dt seconds plus a final sample at the endpoint.
TimedPath time_parameterize(const Path& path, double speed_scale, double v_max, double dt);

/// Arc-length lookup over a path that repeats when traversed past its end.
/// Closed paths repeat seamlessly. Open paths return to their start along a
/// straight segment when that segment clears the exclusion disc, and retrace
/// themselves in reverse otherwise.
class LoopedPath {
public:
    LoopedPath(const Path& path, const ArenaSpec& arena);

    /// Position and unit tangent at arc length s (any s >= 0).
    struct Pose {
        Vec2 position;
        Vec2 tangent;
    };
    Pose at(double s) const;

    double cycle_length() const { return cumulative_.back(); }

private:
    std::vector<Vec2> points_;
    std::vector<double> cumulative_;
};

/// "x_cm y_cm t_s" table with a one-line '#' header.
void write_timed_path(std::ostream& os, const TimedPath& path, TrajectoryKind kind, std::uint64_t seed);

}  // namespace stirlab::trajectory
