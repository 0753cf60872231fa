#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perception.hpp"
#include "session.hpp"

namespace stirlab::confidence {

using perception::FeatureVector;

inline constexpr std::size_t kFeatures = 6;
inline constexpr std::size_t kTerms = 28;
inline constexpr const char* kFileTag = "stirlab-coef v1";

using Row = std::array<double, kTerms>;

/// Quadratic response-surface model over standardised features. Terms are
/// ordered [1, x1..x6, x1^2..x6^2, x1x2, x1x3, ..., x5x6].
struct Coefficients {
    std::array<double, kFeatures> mean{};
    std::array<double, kFeatures> stddev{1, 1, 1, 1, 1, 1};
    Row beta{};
    double fit_residual_std = 0.0;
    std::string training_meta;

    double beta0() const { return beta[0]; }
    double linear(std::size_t i) const { return beta[1 + i]; }
    double quadratic(std::size_t i) const { return beta[1 + kFeatures + i]; }
    /// Cross term for 0 <= i < j < 6.
    double cross(std::size_t i, std::size_t j) const;

    bool operator==(const Coefficients&) const = default;
};

/// Index of the cross term x_i x_j (i < j, zero-based) inside a design row.
std::size_t cross_index(std::size_t i, std::size_t j);

/// Human-readable name of design column `col`, e.g. "x1*x4".
std::string term_name(std::size_t col);

Row design_row(const std::array<double, kFeatures>& x);
inline Row design_row(const FeatureVector& x) { return design_row(x.as_array()); }

struct Sample {
    FeatureVector x;
    double target = 0.0;
};

/// Ordinary least squares on standardised features via column-pivoted
/// Householder QR. Throws FitError on too few rows or a rank-deficient design.
Coefficients fit(std::span<const Sample> rows);

/// Model value before clipping.
double predict_raw(const Coefficients& coef, const FeatureVector& x);

/// Model value clipped to [0, 1]; the residual term never enters.
double predict(const Coefficients& coef, const FeatureVector& x);

/// The same polynomial expressed over unstandardised features.
Row raw_polynomial(const Coefficients& coef);

struct CalibrationReport {
    Coefficients coefficients;
    double heldout_r2 = 0.0;
    std::size_t train_rows = 0;
    std::size_t heldout_rows = 0;
};

/// Simulates `n_frames` frames over all densities, trajectories and a spread of
/// speeds, then fits on 80% and scores R^2 on the remaining 20%.
CalibrationReport calibrate(const SimParams& params, std::size_t n_frames, std::uint64_t seed);

/// The simulated frames calibrate() fits on, exposed for diagnostics.
std::vector<Sample> calibration_frames(const SimParams& params, std::size_t n_frames, std::uint64_t seed);

void save(const Coefficients& coef, const std::filesystem::path& path);
Coefficients load(const std::filesystem::path& path);

std::string serialize(const Coefficients& coef);
Coefficients deserialize(const std::string& text);

}  // namespace stirlab::confidence
