#include "confidence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "numfmt.hpp"

namespace stirlab::confidence {

std::size_t cross_index(std::size_t i, std::size_t j) {
    // Offset of row i in the strict upper triangle, then the column within it.
    const std::size_t before = i * (2 * kFeatures - i - 1) / 2;
    return 1 + 2 * kFeatures + before + (j - i - 1);
}

double Coefficients::cross(std::size_t i, std::size_t j) const { return beta[cross_index(i, j)]; }

std::string term_name(std::size_t col) {
    if (col == 0) return "1";
    if (col <= kFeatures) return "x" + std::to_string(col);
    if (col <= 2 * kFeatures) return "x" + std::to_string(col - kFeatures) + "^2";
    for (std::size_t i = 0; i < kFeatures; ++i) {
        for (std::size_t j = i + 1; j < kFeatures; ++j) {
            if (cross_index(i, j) == col) return "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
        }
    }
    return "?";
}

Row design_row(const std::array<double, kFeatures>& x) {
    for (double v : x) {
        if (!std::isfinite(v)) throw ParameterError("design_row: non-finite feature value");
    }
    Row row{};
    row[0] = 1.0;
    for (std::size_t i = 0; i < kFeatures; ++i) {
        row[1 + i] = x[i];
        row[1 + kFeatures + i] = x[i] * x[i];
    }
    std::size_t col = 1 + 2 * kFeatures;
    for (std::size_t i = 0; i < kFeatures; ++i) {
        for (std::size_t j = i + 1; j < kFeatures; ++j) row[col++] = x[i] * x[j];
    }
    return row;
}

namespace {

std::array<double, kFeatures> standardize(const Coefficients& coef, const FeatureVector& x) {
    auto z = x.as_array();
    for (std::size_t i = 0; i < kFeatures; ++i) z[i] = (z[i] - coef.mean[i]) / coef.stddev[i];
    return z;
}

}  // namespace

Coefficients fit(std::span<const Sample> rows) {
    const std::size_t n = rows.size();
    if (n < kTerms) {
        throw FitError("fit needs at least " + std::to_string(kTerms) + " rows, got " + std::to_string(n));
    }
    Coefficients coef;
    for (const auto& r : rows) {
        if (!std::isfinite(r.target) || r.target < 0.0 || r.target > 1.0) {
            throw FitError("fit targets must be confidences in [0, 1]");
        }
    }
    for (std::size_t i = 0; i < kFeatures; ++i) {
        double sum = 0.0;
        for (const auto& r : rows) sum += r.x.as_array()[i];
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = r.x.as_array()[i] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        if (!(sd > 0.0) || !std::isfinite(sd)) {
            throw FitError("rank-deficient design: feature x" + std::to_string(i + 1) +
                           " is constant and collinear with the intercept");
        }
        coef.mean[i] = mean;
        coef.stddev[i] = sd;
    }

    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kTerms));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = design_row(standardize(coef, rows[r].x));
        for (std::size_t c = 0; c < kTerms; ++c) A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
        b(static_cast<Eigen::Index>(r)) = rows[r].target;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(kTerms)) {
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < static_cast<Eigen::Index>(kTerms); ++k) {
            if (!names.empty()) names += ", ";
            names += term_name(static_cast<std::size_t>(perm(k)));
        }
        throw FitError("rank-deficient design (rank " + std::to_string(qr.rank()) + " of " +
                       std::to_string(kTerms) + "); near-collinear columns: " + names);
    }
    const Eigen::VectorXd beta = qr.solve(b);
    for (std::size_t c = 0; c < kTerms; ++c) coef.beta[c] = beta(static_cast<Eigen::Index>(c));

    const double ssr = (A * beta - b).squaredNorm();
    coef.fit_residual_std = n > kTerms ? std::sqrt(ssr / static_cast<double>(n - kTerms)) : 0.0;
    return coef;
}

double predict_raw(const Coefficients& coef, const FeatureVector& x) {
    const auto row = design_row(standardize(coef, x));
    double sum = 0.0;
    for (std::size_t c = 0; c < kTerms; ++c) sum += row[c] * coef.beta[c];
    return sum;
}

double predict(const Coefficients& coef, const FeatureVector& x) {
    return std::clamp(predict_raw(coef, x), 0.0, 1.0);
}

Row raw_polynomial(const Coefficients& coef) {
    // z_i = a_i x_i + b_i; expand every standardised term over x.
    std::array<double, kFeatures> a{};
    std::array<double, kFeatures> b{};
    for (std::size_t i = 0; i < kFeatures; ++i) {
        a[i] = 1.0 / coef.stddev[i];
        b[i] = -coef.mean[i] / coef.stddev[i];
    }
    Row raw{};
    raw[0] = coef.beta0();
    for (std::size_t i = 0; i < kFeatures; ++i) {
        const double bi = coef.linear(i);
        const double bii = coef.quadratic(i);
        raw[0] += bi * b[i] + bii * b[i] * b[i];
        raw[1 + i] += bi * a[i] + 2.0 * bii * a[i] * b[i];
        raw[1 + kFeatures + i] += bii * a[i] * a[i];
    }
    for (std::size_t i = 0; i < kFeatures; ++i) {
        for (std::size_t j = i + 1; j < kFeatures; ++j) {
            const double bij = coef.cross(i, j);
            raw[0] += bij * b[i] * b[j];
            raw[1 + i] += bij * a[i] * b[j];
            raw[1 + j] += bij * a[j] * b[i];
            raw[cross_index(i, j)] += bij * a[i] * a[j];
        }
    }
    return raw;
}

std::vector<Sample> calibration_frames(const SimParams& params, std::size_t n_frames, std::uint64_t seed) {
    params.check();
    std::vector<Sample> frames;
    frames.reserve(n_frames);
    for (std::uint64_t trial = 0; frames.size() < n_frames; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, {0xCA11B, trial});
        Rng rng(derive_seed(trial_seed, {7}));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> jitter(0.0, 0.05);

        const auto density = static_cast<fluidsim::Density>(trial % 3);
        const auto kind = trajectory::kAllKinds[(trial / 3) % trajectory::kAllKinds.size()];
        double speed = 0.1 + 0.9 * unit(rng);
        const double stir_start = 2.0;
        const double stir_stop = stir_start + 2.0 * std::ceil(1.0 + 14.0 * unit(rng));
        const double end = stir_stop + 20.0;

        StirSession session(params, density, kind, trial_seed);
        for (double t = 0.0; t <= end + 1e-9 && frames.size() < n_frames; t += 2.0) {
            session.advance_to(t);
            if (t >= stir_stop - 1e-9 && session.stirring()) session.stop_stirring();
            else if (t >= stir_start - 1e-9 && t < stir_stop - 1e-9) {
                if (session.stirring()) {
                    speed = std::clamp(speed + jitter(rng), 0.05, 1.0);
                    session.set_speed(speed);
                } else {
                    session.start_stirring(speed);
                }
            }
            const auto rec = session.capture();
            frames.push_back({rec.features, rec.confidence});
        }
    }
    return frames;
}

CalibrationReport calibrate(const SimParams& params, std::size_t n_frames, std::uint64_t seed) {
    const auto frames = calibration_frames(params, n_frames, seed);
    std::vector<Sample> train;
    std::vector<Sample> heldout;
    for (std::size_t i = 0; i < frames.size(); ++i) (i % 5 == 4 ? heldout : train).push_back(frames[i]);

    CalibrationReport report;
    report.coefficients = fit(train);
    report.train_rows = train.size();
    report.heldout_rows = heldout.size();

    if (!heldout.empty()) {
        double mean = 0.0;
        for (const auto& s : heldout) mean += s.target;
        mean /= static_cast<double>(heldout.size());
        double ssr = 0.0;
        double sst = 0.0;
        for (const auto& s : heldout) {
            const double e = predict(report.coefficients, s.x) - s.target;
            ssr += e * e;
            sst += (s.target - mean) * (s.target - mean);
        }
        report.heldout_r2 = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    }

    std::ostringstream meta;
    meta << "meta source=calibrate n_frames=" << frames.size() << " seed=" << seed
         << " train_rows=" << report.train_rows << " heldout_rows=" << report.heldout_rows
         << " heldout_r2=" << format_double(report.heldout_r2) << '\n'
         << "meta x1=mean detection confidence over TP and FP detections\n"
         << "meta x2=(TP+FP)/" << format_double(params.detector.count_normalizer) << '\n'
         << "meta x3=proxy: 1 - fraction of partially occluded pests\n"
         << "meta x4=proxy: fraction of pests overlapping another pest\n"
         << "meta x5=proxy: 1 - min(agitation, 1)\n"
         << "meta x6=proxy: 1 - normalised chi-square of pest counts over 6 angular sectors";
    report.coefficients.training_meta = meta.str();
    return report;
}

std::string serialize(const Coefficients& coef) {
    std::ostringstream os;
    os << kFileTag << '\n';
    for (std::size_t i = 0; i < kFeatures; ++i) os << (i ? " " : "") << format_double(coef.mean[i]);
    os << '\n';
    for (std::size_t i = 0; i < kFeatures; ++i) os << (i ? " " : "") << format_double(coef.stddev[i]);
    os << '\n';
    for (double b : coef.beta) os << format_double(b) << '\n';
    os << format_double(coef.fit_residual_std) << '\n';
    if (!coef.training_meta.empty()) os << coef.training_meta << '\n';
    return os.str();
}

Coefficients deserialize(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
    }
    if (lines.empty() || trim(lines[0]) != kFileTag) {
        throw FormatError("coefficient file: expected version tag '" + std::string(kFileTag) + "', found '" +
                          (lines.empty() ? std::string() : lines[0]) + "'");
    }
    if (lines.size() < 3) throw FormatError("coefficient file: missing standardisation lines");

    Coefficients coef;
    auto read_six = [&](std::size_t line_no, std::array<double, kFeatures>& out, const char* what) {
        const auto fields = split_ws(lines[line_no]);
        if (fields.size() != kFeatures) {
            throw FormatError(std::string("coefficient file: line ") + std::to_string(line_no + 1) + " must hold 6 " +
                              what);
        }
        for (std::size_t i = 0; i < kFeatures; ++i) out[i] = parse_double(fields[i], what);
    };
    read_six(1, coef.mean, "standardisation means");
    read_six(2, coef.stddev, "standardisation stds");
    for (double sd : coef.stddev) {
        if (!(sd > 0.0)) throw FormatError("coefficient file: standardisation stds must be positive");
    }

    std::vector<double> numbers;
    std::size_t i = 3;
    for (; i < lines.size(); ++i) {
        double v = 0.0;
        if (!try_parse_double(lines[i], v)) break;
        numbers.push_back(v);
    }
    if (numbers.size() != kTerms + 1) {
        throw FormatError("coefficient file: expected " + std::to_string(kTerms) +
                          " coefficients plus a residual std, found " + std::to_string(numbers.size()) +
                          " numeric lines");
    }
    std::copy(numbers.begin(), numbers.begin() + kTerms, coef.beta.begin());
    coef.fit_residual_std = numbers.back();
    if (coef.fit_residual_std < 0.0) throw FormatError("coefficient file: residual std must be non-negative");

    std::string meta;
    for (; i < lines.size(); ++i) {
        if (!meta.empty()) meta += '\n';
        meta += lines[i];
    }
    coef.training_meta = meta;
    return coef;
}

void save(const Coefficients& coef, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write coefficient file " + path.string());
    out << serialize(coef);
    if (!out) throw IoError("failed writing coefficient file " + path.string());
}

Coefficients load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read coefficient file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

}  // namespace stirlab::confidence
