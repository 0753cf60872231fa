#include "trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "error.hpp"
#include "numfmt.hpp"
#include "rng.hpp"

namespace stirlab::trajectory {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Appends the straight run a -> b (a already present) at the given spacing.
void append_line(std::vector<Vec2>& pts, Vec2 a, Vec2 b, double spacing) {
    const double len = norm(b - a);
    if (len == 0.0) return;
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-12)));
    for (int i = 1; i < n; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / n));
    pts.push_back(b);
}

// Appends one full clockwise turn around `center` starting and ending at the
// point at angle `start_angle` (which must already be the last point).
void append_clockwise_turn(std::vector<Vec2>& pts, Vec2 center, double radius, double start_angle,
                           double spacing) {
    const Vec2 start = pts.back();
    const int n = std::max(8, static_cast<int>(std::ceil(kTwoPi * radius / spacing - 1e-12)));
    for (int i = 1; i < n; ++i) {
        pts.push_back(center + polar(radius, start_angle - kTwoPi * i / n));
    }
    pts.push_back(start);
}

Path polygon_path(TrajectoryKind kind, int sides, double radius, double spacing) {
    Path path{{}, kind, true};
    path.waypoints.push_back({radius, 0.0});
    for (int v = 1; v <= sides; ++v) {
        const Vec2 next = v == sides ? Vec2{radius, 0.0} : polar(radius, -kTwoPi * v / sides);
        append_line(path.waypoints, path.waypoints.back(), next, spacing);
    }
    return path;
}

Path spiral_path(const ArenaSpec& arena, double spacing) {
    constexpr int kTurns = 3;
    const double r0 = arena.exclusion_radius();
    const double r1 = arena.reference_radius;
    const double phi_end = kTwoPi * kTurns;
    const double growth = (r1 - r0) / phi_end;  // dr/dphi

    Path path{{}, TrajectoryKind::Spiral, false};
    auto point = [&](double phi) { return polar(r0 + growth * phi, -phi); };
    double phi = 0.0;
    path.waypoints.push_back(point(0.0));
    while (true) {
        const double r = r0 + growth * phi;
        phi += spacing / std::sqrt(r * r + growth * growth);
        if (phi >= phi_end - 1e-9) break;
        path.waypoints.push_back(point(phi));
    }
    // Pin the endpoint exactly onto the reference circle.
    path.waypoints.push_back({r1 * std::cos(-phi_end), r1 * std::sin(-phi_end)});
    path.waypoints.back() = path.waypoints.back() * (r1 / norm(path.waypoints.back()));
    return path;
}

Path four_small_circles_path(const ArenaSpec& arena, const GeneratorOptions& opt) {
    const double rs = opt.small_circle_radius;
    const double ring = arena.reference_radius - rs;
    Path path{{}, TrajectoryKind::FourSmallCircles, true};
    path.waypoints.push_back({arena.reference_radius, 0.0});
    for (int i = 0; i < 4; ++i) {
        const double angle = -kTwoPi * i / 4.0;
        const Vec2 center = polar(ring, angle);
        append_clockwise_turn(path.waypoints, center, rs, angle, opt.spacing);
        const Vec2 next_entry = i == 3 ? Vec2{arena.reference_radius, 0.0}
                                       : polar(arena.reference_radius, -kTwoPi * (i + 1) / 4.0);
        append_line(path.waypoints, path.waypoints.back(), next_entry, opt.spacing);
    }
    return path;
}

Path random_lines_path(const ArenaSpec& arena, std::uint64_t seed, const GeneratorOptions& opt) {
    if (opt.n_lines < 1) throw ParameterError("random lines: n_lines must be >= 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double R = arena.reference_radius;
    const double excl = arena.exclusion_radius();

    Path path{{}, TrajectoryKind::RandomLines, false};
    Vec2 current{R, 0.0};
    path.waypoints.push_back(current);
    for (int line = 0; line < opt.n_lines; ++line) {
        bool placed = false;
        for (int attempt = 0; attempt < opt.retry_budget; ++attempt) {
            const double r = R * std::sqrt(unit(rng));
            const double theta = kTwoPi * unit(rng);
            const Vec2 end = polar(r, theta);
            if (norm(end - current) < opt.spacing) continue;
            if (point_segment_distance({0.0, 0.0}, current, end) < excl) continue;
            append_line(path.waypoints, current, end, opt.spacing);
            current = end;
            placed = true;
            break;
        }
        if (!placed) {
            throw GenerationError("random_lines: no admissible chord " + std::to_string(line + 1) + " after " +
                                  std::to_string(opt.retry_budget) + " attempts");
        }
    }
    return path;
}

}  // namespace

void ArenaSpec::check() const {
    const double excl = exclusion_radius();
    if (!(column_radius > 0.0 && stick_radius > 0.0 && excl < reference_radius && reference_radius < trap_radius)) {
        throw ParameterError("arena: require 0 < column_radius + stick_radius < reference_radius < trap_radius");
    }
}

std::string_view to_string(TrajectoryKind kind) {
    switch (kind) {
        case TrajectoryKind::Circle: return "circle";
        case TrajectoryKind::Square: return "square";
        case TrajectoryKind::Triangle: return "triangle";
        case TrajectoryKind::Spiral: return "spiral";
        case TrajectoryKind::FourSmallCircles: return "four_small_circles";
        case TrajectoryKind::RandomLines: return "random_lines";
    }
    return "unknown";
}

TrajectoryKind parse_kind(std::string_view name) {
    name = trim(name);
    for (auto k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    throw ParameterError("unknown trajectory kind '" + std::string(name) +
                         "' (expected circle, square, triangle, spiral, four_small_circles, random_lines)");
}

Path generate(TrajectoryKind kind, const ArenaSpec& arena, std::uint64_t seed, const GeneratorOptions& options) {
    arena.check();
    if (!(options.spacing > 0.0)) throw ParameterError("trajectory spacing must be positive");
    const double R = arena.reference_radius;
    switch (kind) {
        case TrajectoryKind::Circle: {
            Path path{{}, kind, true};
            path.waypoints.push_back({R, 0.0});
            append_clockwise_turn(path.waypoints, {0.0, 0.0}, R, 0.0, options.spacing);
            return path;
        }
        case TrajectoryKind::Square: return polygon_path(kind, 4, R, options.spacing);
        case TrajectoryKind::Triangle: return polygon_path(kind, 3, R, options.spacing);
        case TrajectoryKind::Spiral: return spiral_path(arena, options.spacing);
        case TrajectoryKind::FourSmallCircles: return four_small_circles_path(arena, options);
        case TrajectoryKind::RandomLines: return random_lines_path(arena, seed, options);
    }
    throw ParameterError("unknown trajectory kind");
}

double path_length(const Path& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) total += norm(path.waypoints[i] - path.waypoints[i - 1]);
    return total;
}

double signed_area(const Path& path) {
    const auto& w = path.waypoints;
    double twice = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) twice += cross(w[i], w[(i + 1) % w.size()]);
    return 0.5 * twice;
}

ValidationReport validate(const Path& path, const ArenaSpec& arena) {
    ValidationReport report;
    const auto& w = path.waypoints;
    if (w.empty()) return report;
    report.min_center_distance = norm(w.front());
    report.max_center_distance = norm(w.front());
    for (std::size_t i = 1; i < w.size(); ++i) {
        report.min_center_distance =
            std::min(report.min_center_distance, point_segment_distance({0.0, 0.0}, w[i - 1], w[i]));
        report.max_center_distance = std::max(report.max_center_distance, norm(w[i]));
    }
    report.violation = report.min_center_distance < arena.exclusion_radius() - 1e-9;
    return report;
}

namespace {

std::vector<double> cumulative_lengths(const std::vector<Vec2>& pts) {
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + norm(pts[i] - pts[i - 1]);
    return cum;
}

Vec2 interpolate(const std::vector<Vec2>& pts, const std::vector<double>& cum, double s, Vec2* tangent) {
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t hi = static_cast<std::size_t>(it - cum.begin());
    if (hi == 0) hi = 1;
    if (hi >= pts.size()) hi = pts.size() - 1;
    const std::size_t lo = hi - 1;
    const double seg = cum[hi] - cum[lo];
    const Vec2 d = pts[hi] - pts[lo];
    if (tangent) *tangent = seg > 0.0 ? d / seg : Vec2{};
    const double f = seg > 0.0 ? std::clamp((s - cum[lo]) / seg, 0.0, 1.0) : 0.0;
    return pts[lo] + d * f;
}

}  // namespace

TimedPath time_parameterize(const Path& path, double speed_scale, double v_max, double dt) {
    if (!(speed_scale > 0.0 && speed_scale <= 1.0)) throw ParameterError("speed_scale must be in (0, 1]");
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (!(v_max > 0.0)) throw ParameterError("v_max must be positive");
    if (path.waypoints.size() < 2) throw ParameterError("path needs at least two waypoints");

    const auto cum = cumulative_lengths(path.waypoints);
    const double length = cum.back();
    const double speed = speed_scale * v_max;
    const double total = length / speed;

    TimedPath out;
    out.speed_scale = speed_scale;
    out.v_max = v_max;
    const auto n = static_cast<std::size_t>(std::floor(total / dt + 1e-9));
    out.samples.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(static_cast<double>(i) * dt, total);
        const double s = std::min(speed * t, length);
        out.samples.push_back({interpolate(path.waypoints, cum, s, nullptr), t, s});
    }
    if (total - out.samples.back().t > 1e-9 * std::max(1.0, total)) {
        out.samples.push_back({path.waypoints.back(), total, length});
    }
    return out;
}

LoopedPath::LoopedPath(const Path& path, const ArenaSpec& arena) {
    if (path.waypoints.size() < 2) throw ParameterError("path needs at least two waypoints");
    auto push = [this](Vec2 p) {
        if (points_.empty() || !(points_.back() == p)) points_.push_back(p);
    };
    for (auto p : path.waypoints) push(p);
    if (!path.closed) {
        const Vec2 first = path.waypoints.front();
        const Vec2 last = path.waypoints.back();
        if (point_segment_distance({0.0, 0.0}, last, first) >= arena.exclusion_radius() - 1e-9) {
            push(first);
        } else {
            for (auto it = path.waypoints.rbegin() + 1; it != path.waypoints.rend(); ++it) push(*it);
        }
    }
    cumulative_ = cumulative_lengths(points_);
    if (!(cumulative_.back() > 0.0)) throw ParameterError("path has zero length");
}

LoopedPath::Pose LoopedPath::at(double s) const {
    const double L = cumulative_.back();
    double u = std::fmod(s, L);
    if (u < 0.0) u += L;
    Pose pose;
    pose.position = interpolate(points_, cumulative_, u, &pose.tangent);
    return pose;
}

void write_timed_path(std::ostream& os, const TimedPath& path, TrajectoryKind kind, std::uint64_t seed) {
    os << "# kind=" << to_string(kind) << " seed=" << seed << " speed_scale=" << format_double(path.speed_scale)
       << " v_max=" << format_double(path.v_max) << " columns=x_cm,y_cm,t_s\n";
    for (const auto& s : path.samples) {
        os << format_double(s.position.x) << ' ' << format_double(s.position.y) << ' ' << format_double(s.t) << '\n';
    }
}

}  // namespace stirlab::trajectory
