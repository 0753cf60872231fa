#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

namespace stirlab::fluidsim {

using trajectory::ArenaSpec;

enum class Density { Low, Medium, High };

inline constexpr std::array<Density, 3> kAllDensities = {Density::Low, Density::Medium, Density::High};

std::string_view to_string(Density d);
Density parse_density(std::string_view name);
/// Pests per template region: 2 / 4 / 6.
int pests_per_region(Density d);

struct Pest {
    int id = 0;
    Vec2 position;
    Vec2 velocity;
    double radius = 0.4;
    int z_rank = 0;  // higher ranks are drawn on top
};

struct StickState {
    Vec2 position;
    Vec2 velocity;
    double radius = 1.0;
};

/// Stainless-steel template analogue: equal circular cells on a ring.
struct TemplateSpec {
    int n_regions = 8;
    double cell_radius = 1.5;
    double ring_radius = 5.5;
    double pest_radius = 0.4;
    int max_attempts = 10'000;  // per region
};

struct FlowParams {
    double kernel_sigma = 2.0;     // cm
    double drag_coeff = 2.5;       // 1/s
    double swirl_coeff = 0.3;
    double noise_scale = 0.5;      // cm/s per unit agitation
    double agitation_gain = 0.05;
    double agitation_decay = 0.15; // 1/s

    void check() const;
};

struct Scene {
    ArenaSpec arena;
    std::vector<Pest> pests;
    std::optional<StickState> stick;
    double agitation = 0.0;
    double time = 0.0;
    Rng rng;
};

/// Area fraction of one disc covered by an equal-radius disc at distance d.
double lens_fraction(double d, double radius);

/// Largest lens fraction between this pest and any other pest.
double max_overlap_fraction(const std::vector<Pest>& pests, std::size_t index);

Scene init_scene(Density density, const TemplateSpec& tmpl, const ArenaSpec& arena, std::uint64_t seed);

Vec2 stick_velocity_field(const StickState& stick, const FlowParams& flow, Vec2 query);

/// Advances the scene by dt in place. `stick` is the stick sample for this
/// step, or nullopt while it is out of the water.
void step(Scene& scene, const std::optional<StickState>& stick, const FlowParams& flow, double dt);

inline double agitation_energy(const Scene& scene) { return scene.agitation; }

double kinetic_energy(const Scene& scene);

/// "id x_cm y_cm z_rank" rows after a '#' line carrying time and agitation.
void write_snapshot(std::ostream& os, const Scene& scene);

}  // namespace stirlab::fluidsim
