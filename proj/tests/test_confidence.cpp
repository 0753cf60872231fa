#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "confidence.hpp"
#include "error.hpp"

using namespace stirlab;
using namespace stirlab::confidence;

namespace {

using X = std::array<double, kFeatures>;

// Evaluates a raw-feature polynomial term by term, without design_row.
double poly_oracle(const Row& c, const X& x) {
    double v = c[0];
    for (std::size_t i = 0; i < 6; ++i) v += c[1 + i] * x[i] + c[7 + i] * x[i] * x[i];
    std::size_t k = 13;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) v += c[k++] * x[i] * x[j];
    }
    return v;
}

Row random_coefficients(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Row c{};
    c[0] = 0.5;
    for (std::size_t i = 1; i <= 6; ++i) c[i] = 0.04 * u(rng);
    for (std::size_t i = 7; i <= 12; ++i) c[i] = 0.02 * u(rng);
    for (std::size_t i = 13; i < kTerms; ++i) c[i] = 0.005 * u(rng);
    return c;
}

std::vector<Sample> synthetic(const Row& c, std::size_t n, Rng& rng, double noise) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> eps(0.0, noise);
    std::vector<Sample> rows;
    for (std::size_t r = 0; r < n; ++r) {
        X x;
        for (auto& v : x) v = u(rng);
        double y = poly_oracle(c, x);
        if (noise > 0.0) y += eps(rng);
        rows.push_back({FeatureVector::from_array(x), y});
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("stirlab_test_" + name);
}

}  // namespace

TEST(DesignRow, TermCountAndOrder) {
    EXPECT_EQ(kTerms, 1u + 6u + 6u + 15u);
    const auto zero = design_row(X{});
    EXPECT_EQ(zero[0], 1.0);
    for (std::size_t i = 1; i < kTerms; ++i) EXPECT_EQ(zero[i], 0.0);
    const auto ones = design_row(X{1, 1, 1, 1, 1, 1});
    for (double v : ones) EXPECT_EQ(v, 1.0);

    const X x{2, 3, 5, 7, 11, 13};
    const auto r = design_row(x);
    EXPECT_EQ(r[1], 2.0);
    EXPECT_EQ(r[6], 13.0);
    EXPECT_EQ(r[7], 4.0);
    EXPECT_EQ(r[12], 169.0);
    EXPECT_EQ(r[13], 6.0);   // x1 x2
    EXPECT_EQ(r[14], 10.0);  // x1 x3
    EXPECT_EQ(r[27], 143.0); // x5 x6
    EXPECT_EQ(cross_index(0, 1), 13u);
    EXPECT_EQ(cross_index(4, 5), 27u);
    EXPECT_EQ(term_name(0), "1");
    EXPECT_EQ(term_name(8), "x2^2");
    EXPECT_EQ(term_name(cross_index(0, 3)), "x1*x4");
}

TEST(DesignRow, RejectsNonFinite) {
    EXPECT_THROW(design_row(X{0, std::numeric_limits<double>::quiet_NaN(), 0, 0, 0, 0}), ParameterError);
    EXPECT_THROW(design_row(X{0, 0, 0, 0, 0, std::numeric_limits<double>::infinity()}), ParameterError);
}

TEST(Fit, NoiselessRecovery) {
    Rng rng(1);
    for (int draw = 0; draw < 100; ++draw) {
        const Row truth = random_coefficients(rng);
        const auto rows = synthetic(truth, 500, rng, 0.0);
        const auto coef = fit(rows);
        const auto raw = raw_polynomial(coef);
        for (std::size_t i = 0; i < kTerms; ++i) ASSERT_NEAR(raw[i], truth[i], 1e-6) << term_name(i);
        for (std::size_t r = 0; r < 20; ++r) {
            ASSERT_NEAR(predict(coef, rows[r].x), rows[r].target, 1e-6);
        }
    }
}

TEST(Fit, NoisyHeldOutRmse) {
    Rng rng(2);
    for (int draw = 0; draw < 20; ++draw) {
        const Row truth = random_coefficients(rng);
        const auto train = synthetic(truth, 800, rng, 0.01);
        const auto test = synthetic(truth, 200, rng, 0.01);
        const auto coef = fit(train);
        double se = 0.0;
        for (const auto& s : test) se += std::pow(predict(coef, s.x) - s.target, 2);
        EXPECT_LE(std::sqrt(se / test.size()), 0.02);
        EXPECT_NEAR(coef.fit_residual_std, 0.01, 0.002);
    }
}

TEST(Fit, ConstantTargets) {
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Sample> rows;
    for (int r = 0; r < 200; ++r) {
        X x;
        for (auto& v : x) v = u(rng);
        rows.push_back({FeatureVector::from_array(x), 0.37});
    }
    const auto coef = fit(rows);
    EXPECT_NEAR(coef.beta0(), 0.37, 1e-8);
    for (std::size_t i = 1; i < kTerms; ++i) EXPECT_NEAR(coef.beta[i], 0.0, 1e-8);
    EXPECT_NEAR(coef.fit_residual_std, 0.0, 1e-8);
}

TEST(Fit, TooFewRows) {
    Rng rng(4);
    const auto rows = synthetic(random_coefficients(rng), 27, rng, 0.0);
    EXPECT_THROW(fit(rows), FitError);
    EXPECT_NO_THROW(fit(synthetic(random_coefficients(rng), 28, rng, 0.0)));
}

TEST(Fit, RankDeficiencyNamesColumns) {
    Rng rng(5);
    auto rows = synthetic(random_coefficients(rng), 100, rng, 0.0);
    for (auto& r : rows) r.x.image_clarity = r.x.image_quality;
    try {
        fit(rows);
        FAIL() << "expected FitError";
    } catch (const FitError& e) {
        EXPECT_NE(std::string(e.what()).find("x"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("rank"), std::string::npos);
    }
    auto flat = synthetic(random_coefficients(rng), 100, rng, 0.0);
    for (auto& r : flat) r.x.image_clarity = 1.0;
    try {
        fit(flat);
        FAIL() << "expected FitError";
    } catch (const FitError& e) {
        EXPECT_NE(std::string(e.what()).find("x5"), std::string::npos);
    }
}

TEST(Fit, TargetsMustBeConfidences) {
    Rng rng(6);
    auto rows = synthetic(random_coefficients(rng), 60, rng, 0.0);
    rows[3].target = 1.2;
    EXPECT_THROW(fit(rows), FitError);
}

TEST(Predict, InterceptOnlyAndClipping) {
    Coefficients c;
    c.beta[0] = 0.5;
    EXPECT_EQ(predict(c, FeatureVector::from_array({0.1, 0.9, 0.3, 0.2, 0.5, 0.7})), 0.5);
    c.beta[0] = 1.3;
    EXPECT_EQ(predict_raw(c, {}), 1.3);
    EXPECT_EQ(predict(c, {}), 1.0);
    c.beta[0] = -0.2;
    EXPECT_EQ(predict(c, {}), 0.0);
}

TEST(Predict, ExactlyQuadraticAlongLines) {
    Rng rng(8);
    const auto coef = fit(synthetic(random_coefficients(rng), 300, rng, 0.01));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        X x0, d;
        for (std::size_t i = 0; i < 6; ++i) {
            x0[i] = 0.5 + 0.3 * u(rng);
            d[i] = u(rng);
        }
        auto at = [&](double t) {
            X x;
            for (std::size_t i = 0; i < 6; ++i) x[i] = x0[i] + t * d[i];
            return predict_raw(coef, FeatureVector::from_array(x));
        };
        // Lagrange quadratic through t = 0, 1, 2 predicts t = 3 exactly.
        const double f0 = at(0), f1 = at(1), f2 = at(2);
        EXPECT_NEAR(at(3), f0 - 3 * f1 + 3 * f2, 1e-9);
    }
}

TEST(Persistence, RoundTripIsBitIdentical) {
    Rng rng(9);
    auto coef = fit(synthetic(random_coefficients(rng), 300, rng, 0.01));
    coef.training_meta = "synthetic test\nsecond line";
    const auto path = temp_file("coef_roundtrip.txt");
    save(coef, path);
    const auto back = load(path);
    EXPECT_EQ(back.mean, coef.mean);
    EXPECT_EQ(back.stddev, coef.stddev);
    EXPECT_EQ(back.beta, coef.beta);
    EXPECT_EQ(back.fit_residual_std, coef.fit_residual_std);
    EXPECT_EQ(deserialize(serialize(coef)).beta, coef.beta);
    std::filesystem::remove(path);
}

TEST(Persistence, FileLayout) {
    Coefficients c;
    c.beta[0] = 0.25;
    std::istringstream in(serialize(c));
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    ASSERT_GE(lines.size(), 32u);
    EXPECT_EQ(lines[0], "stirlab-coef v1");
    EXPECT_EQ(lines[3], "0.25");
}

TEST(Persistence, RejectsMalformedFiles) {
    Coefficients c;
    std::istringstream in(serialize(c));
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& l : v) s += l + "\n";
        return s;
    };

    auto short_file = lines;
    short_file.erase(short_file.begin() + 5);  // 27 coefficients
    EXPECT_THROW(deserialize(join(short_file)), FormatError);

    auto wrong_tag = lines;
    wrong_tag[0] = "stirlab-coef v9";
    try {
        deserialize(join(wrong_tag));
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("stirlab-coef v1"), std::string::npos);
    }

    auto garbage = lines;
    garbage[10] = "zero point one";
    EXPECT_THROW(deserialize(join(garbage)), FormatError);
    EXPECT_THROW(load(temp_file("does_not_exist.txt")), IoError);
}

TEST(Calibrate, TooFewFrames) {
    EXPECT_THROW(calibrate(SimParams{}, 10, 0), FitError);
}

TEST(Calibrate, DefaultQualityAndDeterminism) {
    const auto a = calibrate(SimParams{}, 5000, 3);
    EXPECT_GE(a.heldout_r2, 0.6);
    EXPECT_EQ(a.train_rows + a.heldout_rows, 5000u);
    EXPECT_EQ(a.heldout_rows, 1000u);
    EXPECT_NE(a.coefficients.training_meta.find("heldout_r2="), std::string::npos);
    const auto b = calibrate(SimParams{}, 5000, 3);
    EXPECT_EQ(a.coefficients, b.coefficients);
}
