#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fluidsim.hpp"
#include "rng.hpp"

namespace stirlab::perception {

using fluidsim::Scene;

enum class Visibility { Visible, Partial, Occluded };

struct DetectorParams {
    double p_detect_visible = 0.95;
    double p_detect_partial = 0.5;
    double fp_rate = 0.3;        // expected false positives per frame
    double conf_alpha = 8.0;
    double conf_beta = 2.0;
    double clarity_penalty = 0.4;
    double count_normalizer = 100.0;  // scales x2

    void check() const;
};

struct Match {
    int pest_id = 0;
    double confidence = 0.0;
};

struct DetectionResult {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::vector<Match> matches;
    std::vector<double> false_confidences;
};

/// The six inputs of the confidence regression, in model order.
struct FeatureVector {
    double mean_detection_confidence = 0.0;  // x1
    double predicted_count = 0.0;            // x2, normalised
    double image_quality = 0.0;              // x3
    double image_complexity = 0.0;           // x4
    double image_clarity = 0.0;              // x5
    double distribution_uniformity = 0.0;    // x6

    std::array<double, 6> as_array() const {
        return {mean_detection_confidence, predicted_count, image_quality,
                image_complexity, image_clarity, distribution_uniformity};
    }
    static FeatureVector from_array(const std::array<double, 6>& x) {
        return {x[0], x[1], x[2], x[3], x[4], x[5]};
    }
};

/// Fixed 64-point sunflower pattern over the unit disc used for coverage
/// estimates.
const std::array<Vec2, 64>& disc_sample_points();

/// Fraction of each pest's disc covered by pests of higher z-rank.
std::vector<double> covered_fractions(const Scene& scene);

Visibility classify_coverage(double covered_fraction);

std::vector<Visibility> compute_visibility(const Scene& scene);

/// Multiplier applied to detection probabilities under agitation.
double clarity_factor(const DetectorParams& params, double agitation);

DetectionResult simulate_detection(const Scene& scene, const std::vector<Visibility>& visibility,
                                   const DetectorParams& params, double agitation, Rng& rng);

/// GT_real - TP. Throws ParameterError when tp exceeds gt_real.
long counting_error(long gt_real, long tp);

/// Jaccard-style TP / (TP + FP + FN); 1.0 when all three are zero.
double counting_confidence(long tp, long fp, long fn);

FeatureVector extract_features(const Scene& scene, const std::vector<Visibility>& visibility,
                               const DetectionResult& det, double agitation, const DetectorParams& params);

}  // namespace stirlab::perception
