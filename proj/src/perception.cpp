#include "perception.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace stirlab::perception {

void DetectorParams::check() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_detect_visible) || !prob(p_detect_partial) || !prob(clarity_penalty)) {
        throw ParameterError("detector probabilities must lie in [0, 1]");
    }
    if (!(fp_rate >= 0.0)) throw ParameterError("detector.fp_rate must be non-negative");
    if (!(conf_alpha > 0.0 && conf_beta > 0.0)) throw ParameterError("detector confidence shapes must be positive");
    if (!(count_normalizer > 0.0)) throw ParameterError("detector.count_normalizer must be positive");
}

const std::array<Vec2, 64>& disc_sample_points() {
    static const std::array<Vec2, 64> points = [] {
        std::array<Vec2, 64> pts{};
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double r = std::sqrt((static_cast<double>(i) + 0.5) / pts.size());
            pts[i] = polar(r, golden * static_cast<double>(i));
        }
        return pts;
    }();
    return points;
}

std::vector<double> covered_fractions(const Scene& scene) {
    const auto& pests = scene.pests;
    const auto& samples = disc_sample_points();
    std::vector<double> out(pests.size(), 0.0);
    std::vector<std::size_t> above;
    for (std::size_t i = 0; i < pests.size(); ++i) {
        above.clear();
        for (std::size_t j = 0; j < pests.size(); ++j) {
            if (pests[j].z_rank <= pests[i].z_rank) continue;
            const double reach = pests[i].radius + pests[j].radius;
            if (norm2(pests[j].position - pests[i].position) < reach * reach) above.push_back(j);
        }
        if (above.empty()) continue;
        int covered = 0;
        for (const auto& s : samples) {
            const Vec2 p = pests[i].position + s * pests[i].radius;
            for (auto j : above) {
                if (norm2(p - pests[j].position) <= pests[j].radius * pests[j].radius) {
                    ++covered;
                    break;
                }
            }
        }
        out[i] = static_cast<double>(covered) / static_cast<double>(samples.size());
    }
    return out;
}

Visibility classify_coverage(double f) {
    if (f < 0.1) return Visibility::Visible;
    if (f < 0.5) return Visibility::Partial;
    return Visibility::Occluded;
}

std::vector<Visibility> compute_visibility(const Scene& scene) {
    const auto fractions = covered_fractions(scene);
    std::vector<Visibility> out;
    out.reserve(fractions.size());
    for (double f : fractions) out.push_back(classify_coverage(f));
    return out;
}

double clarity_factor(const DetectorParams& params, double agitation) {
    return 1.0 - params.clarity_penalty * std::min(std::max(agitation, 0.0), 1.0);
}

DetectionResult simulate_detection(const Scene& scene, const std::vector<Visibility>& visibility,
                                   const DetectorParams& params, double agitation, Rng& rng) {
    if (visibility.size() != scene.pests.size()) {
        throw ParameterError("visibility does not match the scene's pest count");
    }
    const double factor = clarity_factor(params, agitation);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DetectionResult det;
    for (std::size_t i = 0; i < scene.pests.size(); ++i) {
        double p = 0.0;
        switch (visibility[i]) {
            case Visibility::Visible: p = params.p_detect_visible * factor; break;
            case Visibility::Partial: p = params.p_detect_partial * factor; break;
            case Visibility::Occluded: p = 0.0; break;
        }
        // Draw unconditionally so the stream position does not depend on visibility.
        const double u = unit(rng);
        if (u < p) {
            det.matches.push_back({scene.pests[i].id, sample_beta(rng, params.conf_alpha, params.conf_beta)});
        }
    }
    std::poisson_distribution<int> fp_count(params.fp_rate);
    const int n_fp = params.fp_rate > 0.0 ? fp_count(rng) : 0;
    for (int i = 0; i < n_fp; ++i) det.false_confidences.push_back(sample_beta(rng, params.conf_beta, params.conf_alpha));

    det.tp = static_cast<int>(det.matches.size());
    det.fp = static_cast<int>(det.false_confidences.size());
    det.fn = static_cast<int>(scene.pests.size()) - det.tp;
    return det;
}

long counting_error(long gt_real, long tp) {
    if (tp < 0 || gt_real < 0) throw ParameterError("counts must be non-negative");
    if (tp > gt_real) {
        throw ParameterError("true positives (" + std::to_string(tp) + ") exceed the real count (" +
                             std::to_string(gt_real) + ")");
    }
    return gt_real - tp;
}

double counting_confidence(long tp, long fp, long fn) {
    if (tp < 0 || fp < 0 || fn < 0) throw ParameterError("counts must be non-negative");
    const long denom = tp + fp + fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(tp) / static_cast<double>(denom);
}

namespace {

double uniformity(const Scene& scene) {
    constexpr int kSectors = 6;
    const auto n = static_cast<double>(scene.pests.size());
    if (n == 0.0) return 1.0;
    std::array<int, kSectors> counts{};
    for (const auto& p : scene.pests) {
        double a = std::atan2(p.position.y, p.position.x);
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        int s = static_cast<int>(a / (2.0 * std::numbers::pi / kSectors));
        counts[static_cast<std::size_t>(std::clamp(s, 0, kSectors - 1))]++;
    }
    const double expected = n / kSectors;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // All pests in one sector gives the maximum, (kSectors - 1) * n.
    const double normalized = chi2 / ((kSectors - 1) * n);
    return std::max(0.0, 1.0 - normalized);
}

}  // namespace

FeatureVector extract_features(const Scene& scene, const std::vector<Visibility>& visibility,
                               const DetectionResult& det, double agitation, const DetectorParams& params) {
    FeatureVector x;
    const std::size_t n_det = det.matches.size() + det.false_confidences.size();
    if (n_det > 0) {
        double sum = 0.0;
        for (const auto& m : det.matches) sum += m.confidence;
        for (double c : det.false_confidences) sum += c;
        x.mean_detection_confidence = sum / static_cast<double>(n_det);
    }
    x.predicted_count = static_cast<double>(det.tp + det.fp) / params.count_normalizer;

    const auto n = scene.pests.size();
    if (n > 0) {
        const auto partial = std::count(visibility.begin(), visibility.end(), Visibility::Partial);
        x.image_quality = 1.0 - static_cast<double>(partial) / static_cast<double>(n);
        std::size_t touching = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double reach = scene.pests[i].radius + scene.pests[j].radius;
                if (norm2(scene.pests[i].position - scene.pests[j].position) < reach * reach) {
                    ++touching;
                    break;
                }
            }
        }
        x.image_complexity = static_cast<double>(touching) / static_cast<double>(n);
    } else {
        x.image_quality = 1.0;
    }
    x.image_clarity = 1.0 - std::min(std::max(agitation, 0.0), 1.0);
    x.distribution_uniformity = uniformity(scene);
    return x;
}

}  // namespace stirlab::perception
