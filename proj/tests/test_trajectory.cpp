#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "error.hpp"
#include "trajectory.hpp"

using namespace stirlab;
using namespace stirlab::trajectory;

namespace {

constexpr double kPi = std::numbers::pi;
const ArenaSpec kArena{};

// Distinct polygon corners: points where the heading turns by more than a few
// degrees.
std::vector<Vec2> corners(const Path& p) {
    std::vector<Vec2> out;
    const auto& w = p.waypoints;
    const std::size_t n = w.size() - (p.closed ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 prev = w[(i + n - 1) % n];
        const Vec2 next = w[(i + 1) % n];
        const Vec2 a = w[i] - prev;
        const Vec2 b = next - w[i];
        if (std::abs(cross(a, b)) > 0.05 * norm(a) * norm(b)) out.push_back(w[i]);
    }
    return out;
}

}  // namespace

TEST(Arena, DefaultsAndExclusion) {
    EXPECT_DOUBLE_EQ(kArena.exclusion_radius(), 3.0);
    EXPECT_NO_THROW(kArena.check());
    ArenaSpec bad;
    bad.reference_radius = 2.5;
    EXPECT_THROW(bad.check(), ParameterError);
    bad = {};
    bad.trap_radius = 7.0;
    EXPECT_THROW(bad.check(), ParameterError);
}

TEST(Kind, NamesRoundTrip) {
    for (auto k : kAllKinds) EXPECT_EQ(parse_kind(to_string(k)), k);
    EXPECT_THROW(parse_kind("hexagon"), ParameterError);
}

TEST(Circle, LengthStartAndOrientation) {
    const auto p = generate(TrajectoryKind::Circle, kArena, 0);
    EXPECT_TRUE(p.closed);
    EXPECT_NEAR(path_length(p) / (2 * kPi * 8.0) - 1.0, 0.0, 1e-4);
    EXPECT_EQ(p.waypoints.front(), (Vec2{8.0, 0.0}));
    EXPECT_LT(signed_area(p), 0.0);
    const auto r = validate(p, kArena);
    // Chord midpoints sag inward by at most spacing^2 / (8 r).
    EXPECT_NEAR(r.min_center_distance, 8.0, 0.1 * 0.1 / 64 + 1e-12);
    EXPECT_NEAR(r.max_center_distance, 8.0, 1e-12);
    EXPECT_FALSE(r.violation);
}

TEST(Circle, ResampledLengthConverges) {
    GeneratorOptions opt;
    opt.spacing = 2 * kPi * 8.0 / 1000.0;
    const auto p = generate(TrajectoryKind::Circle, kArena, 0, opt);
    EXPECT_LT(std::abs(path_length(p) / (2 * kPi * 8.0) - 1.0), 1e-4);
}

TEST(Square, SideAndApothem) {
    const auto p = generate(TrajectoryKind::Square, kArena, 0);
    const auto c = corners(p);
    ASSERT_EQ(c.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(norm(c[(i + 1) % 4] - c[i]), 8.0 * std::sqrt(2.0), 1e-9);
    EXPECT_EQ(p.waypoints.front(), (Vec2{8.0, 0.0}));
    EXPECT_LT(signed_area(p), 0.0);
    EXPECT_NEAR(validate(p, kArena).min_center_distance, 8.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(path_length(p), 4 * 8.0 * std::sqrt(2.0), 1e-9);
}

TEST(Triangle, SideAndApothem) {
    const auto p = generate(TrajectoryKind::Triangle, kArena, 0);
    const auto c = corners(p);
    ASSERT_EQ(c.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(norm(c[(i + 1) % 3] - c[i]), 8.0 * std::sqrt(3.0), 1e-9);
    EXPECT_EQ(p.waypoints.front(), (Vec2{8.0, 0.0}));
    EXPECT_LT(signed_area(p), 0.0);
    EXPECT_NEAR(validate(p, kArena).min_center_distance, 4.0, 1e-9);
}

TEST(Spiral, RadiiTurnsAndDirection) {
    const auto p = generate(TrajectoryKind::Spiral, kArena, 0);
    EXPECT_FALSE(p.closed);
    EXPECT_NEAR(norm(p.waypoints.front()), 3.0, 1e-9);
    EXPECT_NEAR(norm(p.waypoints.back()), 8.0, 1e-9);
    EXPECT_EQ(p.waypoints.front(), (Vec2{3.0, 0.0}));

    // Every waypoint lies on r = 3 + (5/3) * turns, three clockwise turns in all.
    double turned = 0.0;
    for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
        const auto a = p.waypoints[i - 1];
        const auto b = p.waypoints[i];
        turned += std::atan2(cross(a, b), dot(a, b));
        ASSERT_NEAR(norm(b), 3.0 + (5.0 / 3.0) * (-turned / (2 * kPi)), 1e-9);
    }
    EXPECT_NEAR(turned, -6 * kPi, 1e-9);
    EXPECT_LT(signed_area(p), 0.0);
}

TEST(FourSmallCircles, LengthStartAndClockwise) {
    const auto p = generate(TrajectoryKind::FourSmallCircles, kArena, 0);
    EXPECT_TRUE(p.closed);
    EXPECT_EQ(p.waypoints.front(), (Vec2{8.0, 0.0}));
    // Independent construction: centres at radius 7 on the four axes, each
    // circle entered and left at its outermost point; consecutive outermost
    // points (8,0), (0,-8), ... are 8*sqrt(2) apart.
    const double chord = norm(Vec2{8.0, 0.0} - Vec2{0.0, -8.0});
    EXPECT_NEAR(chord, 8.0 * std::sqrt(2.0), 1e-12);
    const double analytic = 4 * 2 * kPi * 1.0 + 4 * chord;
    // Polyline loss on the unit circles is about spacing^2 / 24 of their length.
    EXPECT_LT(std::abs(path_length(p) / analytic - 1.0), 2e-4);
    EXPECT_LT(signed_area(p), 0.0);
    const auto r = validate(p, kArena);
    EXPECT_FALSE(r.violation);
    EXPECT_LE(r.max_center_distance, 8.0 + 1e-9);
}

TEST(FourSmallCircles, SmallCirclesAreClockwise) {
    const auto p = generate(TrajectoryKind::FourSmallCircles, kArena, 0);
    // The first loop around centre (7, 0) turns clockwise.
    const Vec2 c{7.0, 0.0};
    double turned = 0.0;
    for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
        const auto a = p.waypoints[i - 1] - c;
        const auto b = p.waypoints[i] - c;
        ASSERT_NEAR(norm(b), 1.0, 1e-9);
        turned += std::atan2(cross(a, b), dot(a, b));
        if (norm(p.waypoints[i] - Vec2{8.0, 0.0}) < 1e-9) break;
    }
    EXPECT_NEAR(turned, -2 * kPi, 1e-6);
}

TEST(RandomLines, ChainedChordsAvoidExclusion) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto p = generate(TrajectoryKind::RandomLines, kArena, seed);
        EXPECT_EQ(p.waypoints.front(), (Vec2{8.0, 0.0}));
        const auto r = validate(p, kArena);
        EXPECT_FALSE(r.violation) << "seed " << seed;
        EXPECT_GE(r.min_center_distance, 3.0 - 1e-9);
        EXPECT_LE(r.max_center_distance, 8.0 + 1e-9);
    }
}

TEST(RandomLines, SeedDeterminesPath) {
    const auto a = generate(TrajectoryKind::RandomLines, kArena, 5);
    const auto b = generate(TrajectoryKind::RandomLines, kArena, 5);
    const auto c = generate(TrajectoryKind::RandomLines, kArena, 6);
    EXPECT_EQ(a.waypoints, b.waypoints);
    EXPECT_NE(a.waypoints, c.waypoints);
}

TEST(RandomLines, ExhaustedBudgetIsGenerationError) {
    ArenaSpec tight;
    tight.column_radius = 6.5;
    tight.stick_radius = 1.4;  // exclusion 7.9 of reference 8
    GeneratorOptions opt;
    opt.retry_budget = 50;
    try {
        generate(TrajectoryKind::RandomLines, tight, 1, opt);
        FAIL() << "expected GenerationError";
    } catch (const GenerationError& e) {
        EXPECT_NE(std::string(e.what()).find("random_lines"), std::string::npos);
    }
}

TEST(Generate, EveryKindValidAndDistinctWaypoints) {
    for (auto k : kAllKinds) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto p = generate(k, kArena, seed);
            ASSERT_GE(p.waypoints.size(), 2u);
            for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
                ASSERT_NE(p.waypoints[i], p.waypoints[i - 1]) << to_string(k);
            }
            for (const auto& w : p.waypoints) {
                ASSERT_GE(norm(w), 3.0 - 1e-9) << to_string(k);
                ASSERT_LE(norm(w), 8.0 + 1e-9) << to_string(k);
            }
            ASSERT_FALSE(validate(p, kArena).violation) << to_string(k);
            if (k != TrajectoryKind::RandomLines) break;
        }
    }
}

TEST(PathLength, TwoPointsAndAdditivity) {
    Path p;
    p.waypoints = {{0, 3}, {0, 8}};
    EXPECT_DOUBLE_EQ(path_length(p), 5.0);
    Path q;
    q.waypoints = {{0, 8}, {3, 8}};
    Path pq;
    pq.waypoints = {{0, 3}, {0, 8}, {3, 8}};
    EXPECT_DOUBLE_EQ(path_length(pq), path_length(p) + path_length(q));
}

TEST(Validate, SegmentThroughCentre) {
    Path p;
    p.waypoints = {{-4, 0}, {4, 0}};
    const auto r = validate(p, kArena);
    EXPECT_DOUBLE_EQ(r.min_center_distance, 0.0);
    EXPECT_TRUE(r.violation);
}

TEST(TimeParameterize, StraightPath) {
    Path p;
    p.waypoints = {{0, 3}, {0, 8}};
    const auto tp = time_parameterize(p, 0.5, 20.0, 0.1);
    ASSERT_EQ(tp.samples.size(), 6u);
    EXPECT_NEAR(tp.samples.back().t, 0.5, 1e-12);
    EXPECT_NEAR(tp.samples.back().position.y, 8.0, 1e-12);
    for (std::size_t i = 1; i < tp.samples.size(); ++i) {
        const auto& a = tp.samples[i - 1];
        const auto& b = tp.samples[i];
        EXPECT_GT(b.t, a.t);
        EXPECT_NEAR((b.s - a.s) / (b.t - a.t), 10.0, 1e-6 * 10.0);
    }
}

TEST(TimeParameterize, CircleLapAndScaling) {
    const auto p = generate(TrajectoryKind::Circle, kArena, 0);
    const auto fast = time_parameterize(p, 1.0, 20.0, 0.05);
    EXPECT_NEAR(fast.samples.back().t, path_length(p) / 20.0, 1e-9);
    EXPECT_NEAR(fast.samples.back().t, 2.51327, 1e-4);
    const auto half = time_parameterize(p, 0.5, 20.0, 0.05);
    const auto quarter = time_parameterize(p, 0.25, 20.0, 0.05);
    EXPECT_NEAR(quarter.samples.back().t / half.samples.back().t, 2.0, 1e-9 * 2.0);
}

TEST(TimeParameterize, SpeedConsistentOnEveryKind) {
    for (auto k : kAllKinds) {
        const auto tp = time_parameterize(generate(k, kArena, 3), 0.7, 20.0, 0.03);
        for (std::size_t i = 1; i < tp.samples.size(); ++i) {
            const auto& a = tp.samples[i - 1];
            const auto& b = tp.samples[i];
            ASSERT_GT(b.t, a.t);
            ASSERT_NEAR((b.s - a.s) / (b.t - a.t), 14.0, 14.0 * 1e-6) << to_string(k);
        }
    }
}

TEST(TimeParameterize, RejectsBadArguments) {
    const auto p = generate(TrajectoryKind::Circle, kArena, 0);
    EXPECT_THROW(time_parameterize(p, 0.0, 20.0, 0.1), ParameterError);
    EXPECT_THROW(time_parameterize(p, -0.5, 20.0, 0.1), ParameterError);
    EXPECT_THROW(time_parameterize(p, 1.5, 20.0, 0.1), ParameterError);
    EXPECT_THROW(time_parameterize(p, 0.5, 20.0, 0.0), ParameterError);
    EXPECT_THROW(time_parameterize(p, 0.5, 0.0, 0.1), ParameterError);
}

TEST(LoopedPath, ClosedPathRepeats) {
    const auto p = generate(TrajectoryKind::Square, kArena, 0);
    const LoopedPath lp(p, kArena);
    EXPECT_NEAR(lp.cycle_length(), path_length(p), 1e-9);
    for (double s : {0.0, 1.3, 7.9, 20.0}) {
        const auto a = lp.at(s).position;
        const auto b = lp.at(s + lp.cycle_length()).position;
        EXPECT_NEAR(norm(a - b), 0.0, 1e-9);
    }
    EXPECT_NEAR(norm(lp.at(0.5).tangent), 1.0, 1e-12);
}

TEST(LoopedPath, OpenPathsStayOutsideExclusion) {
    for (auto k : {TrajectoryKind::Spiral, TrajectoryKind::RandomLines}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const LoopedPath lp(generate(k, kArena, seed), kArena);
            const double L = lp.cycle_length();
            for (int i = 0; i <= 400; ++i) {
                const double s = 2.0 * L * i / 400.0;
                ASSERT_GE(norm(lp.at(s).position), 3.0 - 1e-9) << to_string(k) << " seed " << seed;
            }
        }
    }
}

TEST(LoopedPath, ContinuousAcrossWrap) {
    for (auto k : kAllKinds) {
        const LoopedPath lp(generate(k, kArena, 2), kArena);
        const double L = lp.cycle_length();
        EXPECT_LT(norm(lp.at(L - 1e-6).position - lp.at(L + 1e-6).position), 1e-5) << to_string(k);
    }
}

TEST(WriteTimedPath, HeaderAndRows) {
    Path p;
    p.waypoints = {{0, 3}, {0, 8}};
    const auto tp = time_parameterize(p, 0.5, 20.0, 0.1);
    std::ostringstream os;
    write_timed_path(os, tp, TrajectoryKind::Circle, 42);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# kind=circle seed=42 speed_scale=0.5", 0), 0u);
    int rows = 0;
    while (std::getline(in, line)) {
        double x, y, t;
        std::istringstream(line) >> x >> y >> t;
        ++rows;
    }
    EXPECT_EQ(rows, 6);
}
