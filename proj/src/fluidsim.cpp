#include "fluidsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "error.hpp"
#include "numfmt.hpp"

namespace stirlab::fluidsim {

std::string_view to_string(Density d) {
    switch (d) {
        case Density::Low: return "low";
        case Density::Medium: return "medium";
        case Density::High: return "high";
    }
    return "unknown";
}

Density parse_density(std::string_view name) {
    name = trim(name);
    if (name == "low") return Density::Low;
    if (name == "medium") return Density::Medium;
    if (name == "high") return Density::High;
    throw ParameterError("unknown density '" + std::string(name) + "' (expected low, medium, high)");
}

int pests_per_region(Density d) {
    switch (d) {
        case Density::Low: return 2;
        case Density::Medium: return 4;
        case Density::High: return 6;
    }
    return 0;
}

void FlowParams::check() const {
    if (!(kernel_sigma > 0.0)) throw ParameterError("flow.kernel_sigma must be positive");
    if (drag_coeff < 0.0 || swirl_coeff < 0.0 || noise_scale < 0.0 || agitation_gain < 0.0 || agitation_decay < 0.0) {
        throw ParameterError("flow parameters must be non-negative");
    }
}

double lens_fraction(double d, double radius) {
    if (d >= 2.0 * radius) return 0.0;
    if (d <= 0.0) return 1.0;
    const double u = d / (2.0 * radius);
    return (2.0 / std::numbers::pi) * (std::acos(u) - u * std::sqrt(1.0 - u * u));
}

double max_overlap_fraction(const std::vector<Pest>& pests, std::size_t index) {
    double best = 0.0;
    for (std::size_t j = 0; j < pests.size(); ++j) {
        if (j == index) continue;
        best = std::max(best, lens_fraction(norm(pests[j].position - pests[index].position), pests[index].radius));
    }
    return best;
}

namespace {

// Centre-distance bands realising the overlap targets for equal discs. Lens
// fraction is decreasing in distance, so bisection inverts it.
double distance_for_fraction(double fraction, double radius) {
    double lo = 0.0;
    double hi = 2.0 * radius;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (lens_fraction(mid, radius) > fraction) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct OverlapBand {
    double min_fraction;  // each pest overlaps some neighbour at least this much
    double max_fraction;  // and no pair exceeds this
};

OverlapBand band_for(Density d) {
    switch (d) {
        case Density::Low: return {0.0, 0.0};
        case Density::Medium: return {0.1, 0.3};
        case Density::High: return {0.5, 1.0};
    }
    return {0.0, 0.0};
}

bool place_region(std::vector<Pest>& pests, Vec2 cell_center, int count, Density density, const TemplateSpec& tmpl,
                  Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = tmpl.pest_radius;
    const double room = tmpl.cell_radius - r;
    const auto band = band_for(density);
    const std::size_t base = pests.size();
    const double d_far = density == Density::Low ? 2.0 * r : distance_for_fraction(band.min_fraction, r);
    const double d_near = density == Density::Medium ? distance_for_fraction(band.max_fraction, r) : 0.0;

    auto inside = [&](Vec2 p) { return norm(p - cell_center) <= room; };
    auto random_in_cell = [&] { return cell_center + polar(room * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)); };

    for (int attempt = 0; attempt < tmpl.max_attempts; ++attempt) {
        pests.resize(base);
        bool ok = true;
        for (int k = 0; k < count && ok; ++k) {
            Pest pest;
            pest.radius = r;
            bool placed = false;
            for (int tries = 0; tries < 200 && !placed; ++tries) {
                Vec2 p;
                if (density == Density::Low || k == 0) {
                    p = random_in_cell();
                } else {
                    // Attach to a random earlier pest of this region.
                    std::uniform_int_distribution<std::size_t> pick(base, pests.size() - 1);
                    const Vec2 anchor = pests[pick(rng)].position;
                    const double dist = d_near + (d_far - d_near) * unit(rng);
                    p = anchor + polar(dist, 2.0 * std::numbers::pi * unit(rng));
                }
                if (!inside(p)) continue;
                bool conflict = false;
                for (std::size_t j = base; j < pests.size(); ++j) {
                    const double d = norm(p - pests[j].position);
                    if (density == Density::Low && d < 2.0 * r) conflict = true;
                    if (density == Density::Medium && lens_fraction(d, r) > band.max_fraction) conflict = true;
                }
                if (conflict) continue;
                pest.position = p;
                placed = true;
            }
            if (!placed) ok = false;
            else pests.push_back(pest);
        }
        if (!ok) continue;

        // Region-level acceptance against the density's overlap band.
        std::vector<Pest> region(pests.begin() + static_cast<std::ptrdiff_t>(base), pests.end());
        int severe = 0;
        for (std::size_t i = 0; i < region.size(); ++i) {
            const double f = max_overlap_fraction(region, i);
            if (density == Density::Medium && (f < band.min_fraction || f > band.max_fraction)) ok = false;
            if (f >= 0.5) ++severe;
        }
        if (density == Density::High && 2 * severe < count) ok = false;
        if (ok) return true;
    }
    pests.resize(base);
    return false;
}

}  // namespace

Scene init_scene(Density density, const TemplateSpec& tmpl, const ArenaSpec& arena, std::uint64_t seed) {
    arena.check();
    if (tmpl.n_regions < 1) throw InitError("template needs at least one region");
    if (!(tmpl.pest_radius > 0.0) || tmpl.cell_radius <= tmpl.pest_radius) {
        throw InitError("template cells must be larger than a pest");
    }
    const double inner = arena.column_radius + tmpl.pest_radius;
    const double outer = arena.trap_radius - tmpl.pest_radius;
    if (tmpl.ring_radius - tmpl.cell_radius < inner - tmpl.pest_radius ||
        tmpl.ring_radius + tmpl.cell_radius > outer + tmpl.pest_radius) {
        throw InitError("template ring does not fit inside the trap annulus");
    }
    if (tmpl.n_regions > 1) {
        const double spacing = 2.0 * tmpl.ring_radius * std::sin(std::numbers::pi / tmpl.n_regions);
        if (spacing < 2.0 * tmpl.cell_radius) throw InitError("template regions overlap");
    }

    Scene scene;
    scene.arena = arena;
    scene.rng.seed(seed);
    const int per_region = pests_per_region(density);
    for (int region = 0; region < tmpl.n_regions; ++region) {
        const Vec2 center = polar(tmpl.ring_radius, 2.0 * std::numbers::pi * region / tmpl.n_regions);
        if (!place_region(scene.pests, center, per_region, density, tmpl, scene.rng)) {
            throw InitError("cannot place " + std::to_string(per_region) + " pests in region " +
                            std::to_string(region) + " at " + std::string(to_string(density)) + " density");
        }
    }
    std::vector<int> ranks(scene.pests.size());
    std::iota(ranks.begin(), ranks.end(), 0);
    std::shuffle(ranks.begin(), ranks.end(), scene.rng);
    for (std::size_t i = 0; i < scene.pests.size(); ++i) {
        scene.pests[i].id = static_cast<int>(i);
        scene.pests[i].z_rank = ranks[i];
    }
    return scene;
}

Vec2 stick_velocity_field(const StickState& stick, const FlowParams& flow, Vec2 query) {
    const double d2 = norm2(query - stick.position);
    const double g = std::exp(-d2 / (2.0 * flow.kernel_sigma * flow.kernel_sigma));
    return (stick.velocity + rot90(stick.velocity) * flow.swirl_coeff) * g;
}

void step(Scene& scene, const std::optional<StickState>& stick, const FlowParams& flow, double dt) {
    if (!(dt > 0.0 && dt <= 0.1)) throw ParameterError("step dt must be in (0, 0.1]");
    const double relax = std::exp(-flow.drag_coeff * dt);
    const double sigma = flow.noise_scale * scene.agitation * std::sqrt(dt);
    std::normal_distribution<double> normal(0.0, 1.0);

    for (auto& pest : scene.pests) {
        const Vec2 target = stick ? stick_velocity_field(*stick, flow, pest.position) : Vec2{};
        pest.velocity = target + (pest.velocity - target) * relax;
        if (sigma > 0.0) {
            const double nx = normal(scene.rng);
            const double ny = normal(scene.rng);
            pest.velocity += Vec2{nx, ny} * sigma;
        }
        pest.position += pest.velocity * dt;

        if (stick) {
            const Vec2 off = pest.position - stick->position;
            const double contact = stick->radius + pest.radius;
            const double d = norm(off);
            if (d < contact) {
                const Vec2 n = d > 0.0 ? off / d : Vec2{1.0, 0.0};
                pest.position = stick->position + n * contact;
                const double vn = dot(pest.velocity - stick->velocity, n);
                if (vn < 0.0) pest.velocity -= n * vn;
            }
        }

        const double inner = scene.arena.column_radius + pest.radius;
        const double outer = scene.arena.trap_radius - pest.radius;
        const double r = norm(pest.position);
        if (r > outer) {
            const Vec2 n = pest.position / r;
            pest.position = n * outer;
            const double vn = dot(pest.velocity, n);
            if (vn > 0.0) pest.velocity -= n * (2.0 * vn);
        } else if (r < inner) {
            const Vec2 n = r > 0.0 ? pest.position / r : Vec2{1.0, 0.0};
            pest.position = n * inner;
            const double vn = dot(pest.velocity, n);
            if (vn < 0.0) pest.velocity -= n * (2.0 * vn);
        }
    }

    const double drive = stick ? flow.agitation_gain * norm(stick->velocity) * dt : 0.0;
    scene.agitation = scene.agitation * std::exp(-flow.agitation_decay * dt) + drive;
    scene.stick = stick;
    scene.time += dt;
}

double kinetic_energy(const Scene& scene) {
    double e = 0.0;
    for (const auto& p : scene.pests) e += 0.5 * norm2(p.velocity);
    return e;
}

void write_snapshot(std::ostream& os, const Scene& scene) {
    os << "# t_s=" << format_double(scene.time) << " agitation=" << format_double(scene.agitation)
       << " columns=id,x_cm,y_cm,z_rank\n";
    for (const auto& p : scene.pests) {
        os << p.id << ' ' << format_double(p.position.x) << ' ' << format_double(p.position.y) << ' ' << p.z_rank
           << '\n';
    }
}

}  // namespace stirlab::fluidsim
