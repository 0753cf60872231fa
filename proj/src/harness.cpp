#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "numfmt.hpp"
#include "rng.hpp"

namespace stirlab::harness {

namespace fs = std::filesystem;

std::string_view to_string(SpeedMode m) { return m == SpeedMode::Constant ? "constant" : "adaptive"; }

SpeedMode parse_speed_mode(std::string_view name) {
    if (name == "constant") return SpeedMode::Constant;
    if (name == "adaptive") return SpeedMode::Adaptive;
    throw FormatError("unknown speed mode '" + std::string(name) + "'");
}

DurationSummary summarize(std::span<const double> values) {
    if (values.empty()) throw ParameterError("summarize: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::uint64_t trial_seed(std::uint64_t master, Density density, TrajectoryKind kind, SpeedMode mode, int cell_trial,
                         bool selection) {
    return derive_seed(master, {static_cast<std::uint64_t>(density), static_cast<std::uint64_t>(kind),
                                selection ? 2u : static_cast<std::uint64_t>(mode),
                                static_cast<std::uint64_t>(cell_trial)});
}

namespace {

FrameRow to_row(const FrameRecord& rec, double speed, std::optional<double> predicted) {
    FrameRow row;
    row.t = rec.t;
    row.gt = rec.gt;
    row.tp = rec.tp;
    row.fp = rec.fp;
    row.fn = rec.fn;
    row.error = rec.error;
    row.confidence = rec.confidence;
    row.predicted = predicted;
    row.speed = speed;
    row.features = rec.features;
    return row;
}

void finish_summary(TrialResult& trial) {
    auto& s = trial.summary;
    s.n_frames = static_cast<int>(trial.frames.size());
    if (trial.frames.empty()) return;
    double e = 0.0;
    double c = 0.0;
    for (const auto& f : trial.frames) {
        e += static_cast<double>(f.error);
        c += f.confidence;
    }
    s.mean_error = e / static_cast<double>(trial.frames.size());
    s.mean_confidence = c / static_cast<double>(trial.frames.size());
    s.final_error = static_cast<double>(trial.frames.back().error);
    s.final_confidence = trial.frames.back().confidence;
}

// Frame times are integer multiples of the period so that every trial samples
// the same instants regardless of floating drift.
double frame_time(const Protocol& p, int n) { return p.frame_period * n; }

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

std::string trial_context(Density d, TrajectoryKind k, SpeedMode m, int cell_trial) {
    return "trial (" + std::string(fluidsim::to_string(d)) + ", " + std::string(trajectory::to_string(k)) + ", " +
           std::string(to_string(m)) + ", #" + std::to_string(cell_trial) + ")";
}

}  // namespace

TrialResult run_selection_trial(const ExperimentConfig& cfg, Density density, TrajectoryKind kind, int cell_trial,
                                int id) {
    const auto& p = cfg.protocol;
    TrialResult trial;
    auto& s = trial.summary;
    s.id = id;
    s.density = density;
    s.trajectory = kind;
    s.mode = SpeedMode::Constant;
    s.cell_trial = cell_trial;
    s.seed = trial_seed(cfg.seed, density, kind, SpeedMode::Constant, cell_trial, true);
    s.duration = p.stir_stop - p.stir_start;
    s.outcome = Outcome::Completed;

    try {
        StirSession session(cfg.sim, density, kind, s.seed);
        for (int n = 0;; ++n) {
            const double t = frame_time(p, n);
            if (t > p.end + 1e-9) break;
            // Stirring toggles at exact instants between frames.
            if (p.stir_start > session.time() + 1e-9 && p.stir_start < t + 1e-9) {
                session.advance_to(p.stir_start);
                session.start_stirring(p.speed);
            }
            if (session.stirring() && p.stir_stop > session.time() + 1e-9 && p.stir_stop < t + 1e-9) {
                session.advance_to(p.stir_stop);
                session.stop_stirring();
            }
            session.advance_to(t);
            if (n == 0 && p.stir_start <= 0.0) session.start_stirring(p.speed);
            trial.frames.push_back(to_row(session.capture(), session.stirring() ? session.speed() : 0.0, std::nullopt));
        }
    } catch (const Error&) {
        rethrow_with_context(trial_context(density, kind, SpeedMode::Constant, cell_trial));
    }
    finish_summary(trial);
    return trial;
}

TrialResult run_speed_trial(const ExperimentConfig& cfg, const confidence::Coefficients& coef, Density density,
                            SpeedMode mode, int cell_trial, int id) {
    const auto& p = cfg.protocol;
    const auto kind = cfg.speed_trajectory;
    TrialResult trial;
    auto& s = trial.summary;
    s.id = id;
    s.density = density;
    s.trajectory = kind;
    s.mode = mode;
    s.cell_trial = cell_trial;
    s.seed = trial_seed(cfg.seed, density, kind, mode, cell_trial, false);

    auto ctl_cfg = cfg.controller;
    ctl_cfg.adapt_speed = mode == SpeedMode::Adaptive;
    const bool fixed_window = mode == SpeedMode::Constant && cfg.constant_stop == ConstantStop::FixedWindow;
    if (mode == SpeedMode::Constant) ctl_cfg.s0 = p.speed;
    const double period = ctl_cfg.frame_period;

    try {
        StirSession session(cfg.sim, density, kind, s.seed);
        auto predict = [&](const FrameRecord& rec) { return confidence::predict(coef, rec.features); };

        // Pre-stir frames on the capture grid.
        for (int n = 0;; ++n) {
            const double t = frame_time(p, n);
            if (t >= p.stir_start - 1e-9) break;
            session.advance_to(t);
            const auto rec = session.capture();
            trial.frames.push_back(to_row(rec, 0.0, predict(rec)));
        }

        session.advance_to(p.stir_start);
        if (fixed_window) {
            session.start_stirring(p.speed);
            for (int n = 0;; ++n) {
                const double t = p.stir_start + period * n;
                if (t > p.stir_stop + 1e-9) break;
                session.advance_to(t);
                if (t >= p.stir_stop - 1e-9) session.stop_stirring();
                const auto rec = session.capture();
                trial.frames.push_back(to_row(rec, session.stirring() ? session.speed() : 0.0, predict(rec)));
            }
            s.duration = p.stir_stop - p.stir_start;
            s.outcome = Outcome::Completed;
        } else {
            controller::Controller ctl(ctl_cfg);
            session.start_stirring(ctl.speed());
            for (int n = 0;; ++n) {
                const double t = p.stir_start + period * n;
                session.advance_to(t);
                const auto rec = session.capture();
                const double c_pred = predict(rec);
                const double speed_before = session.speed();
                const auto decision = ctl.step(c_pred);
                trial.frames.push_back(to_row(rec, speed_before, c_pred));
                if (decision.stop) {
                    session.stop_stirring();
                    s.duration = t - p.stir_start;
                    break;
                }
                session.set_speed(decision.speed);
            }
            s.outcome = controller::classify_outcome(ctl);
        }
    } catch (const Error&) {
        rethrow_with_context(trial_context(density, kind, mode, cell_trial));
    }
    finish_summary(trial);
    return trial;
}

SelectionTable aggregate_selection(std::span<const TrialSummary> trials) {
    std::vector<Density> densities;
    std::vector<TrajectoryKind> kinds;
    struct Acc {
        int n = 0;
        double e = 0.0;
        double c = 0.0;
    };
    std::map<std::pair<int, int>, Acc> cells;
    for (const auto& t : trials) {
        if (std::find(densities.begin(), densities.end(), t.density) == densities.end()) densities.push_back(t.density);
        if (std::find(kinds.begin(), kinds.end(), t.trajectory) == kinds.end()) kinds.push_back(t.trajectory);
        auto& acc = cells[{static_cast<int>(t.density), static_cast<int>(t.trajectory)}];
        acc.n++;
        acc.e += t.mean_error;
        acc.c += t.mean_confidence;
    }

    SelectionTable table;
    for (auto d : densities) {
        for (auto k : kinds) {
            const auto it = cells.find({static_cast<int>(d), static_cast<int>(k)});
            if (it == cells.end()) continue;
            const auto& a = it->second;
            table.rows.push_back({d, k, a.n, a.e / a.n, a.c / a.n});
        }
    }
    bool first = true;
    double best_e = 0.0;
    double best_c = 0.0;
    for (auto k : kinds) {
        Table1Row overall{std::nullopt, k, 0, 0.0, 0.0};
        int n_density = 0;
        for (const auto& row : table.rows) {
            if (row.trajectory != k) continue;
            overall.n_trials += row.n_trials;
            overall.mean_error += row.mean_error;
            overall.mean_confidence += row.mean_confidence;
            ++n_density;
        }
        if (n_density == 0) continue;
        overall.mean_error /= n_density;
        overall.mean_confidence /= n_density;
        table.rows.push_back(overall);
        if (first || overall.mean_error < best_e) {
            best_e = overall.mean_error;
            table.best_by_error = k;
        }
        if (first || overall.mean_confidence > best_c) {
            best_c = overall.mean_confidence;
            table.best_by_confidence = k;
        }
        first = false;
    }
    return table;
}

std::vector<Table2Row> aggregate_speed(std::span<const TrialSummary> trials, bool include_failed) {
    std::vector<std::pair<Density, SpeedMode>> order;
    std::map<std::pair<int, int>, std::vector<const TrialSummary*>> cells;
    for (const auto& t : trials) {
        const std::pair<Density, SpeedMode> key{t.density, t.mode};
        if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
        cells[{static_cast<int>(t.density), static_cast<int>(t.mode)}].push_back(&t);
    }
    // Constant before adaptive within a density, densities in appearance order.
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        const auto pos = [&](Density d) {
            for (std::size_t i = 0; i < order.size(); ++i)
                if (order[i].first == d) return i;
            return order.size();
        };
        if (a.first != b.first) return pos(a.first) < pos(b.first);
        return static_cast<int>(a.second) < static_cast<int>(b.second);
    });

    std::vector<Table2Row> rows;
    for (const auto& [d, m] : order) {
        Table2Row row;
        row.density = d;
        row.mode = m;
        std::vector<double> durations;
        for (const auto* t : cells[{static_cast<int>(d), static_cast<int>(m)}]) {
            row.n_trials++;
            if (t->outcome == Outcome::FailedInitiation) row.n_failed++;
            if (t->outcome == Outcome::TimedOut) row.n_timed_out++;
            if (t->outcome != Outcome::FailedInitiation || include_failed) durations.push_back(t->duration);
        }
        row.n_included = static_cast<int>(durations.size());
        if (!durations.empty()) row.duration = summarize(durations);
        rows.push_back(row);
    }
    return rows;
}

SelectionReport run_trajectory_selection(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Job {
        Density d;
        TrajectoryKind k;
        int i;
    };
    std::vector<Job> jobs;
    for (auto d : cfg.densities)
        for (auto k : cfg.trajectories)
            for (int i = 0; i < cfg.trials_per_cell; ++i) jobs.push_back({d, k, i});

    SelectionReport report;
    report.trials.resize(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
        report.trials[j] = run_selection_trial(cfg, jobs[j].d, jobs[j].k, jobs[j].i, static_cast<int>(j));
    });
    std::vector<TrialSummary> summaries;
    for (const auto& t : report.trials) summaries.push_back(t.summary);
    report.table = aggregate_selection(summaries);
    return report;
}

SpeedReport run_speed_comparison(const ExperimentConfig& cfg, const confidence::Coefficients* coef) {
    if (!coef) throw ConfigError("speed comparison needs confidence coefficients; run `calibrate` first");
    cfg.validate();
    struct Job {
        Density d;
        SpeedMode m;
        int i;
    };
    std::vector<Job> jobs;
    for (auto d : cfg.densities)
        for (int i = 0; i < cfg.trials_per_cell; ++i)
            for (auto m : {SpeedMode::Constant, SpeedMode::Adaptive}) jobs.push_back({d, m, i});

    SpeedReport report;
    report.trials.resize(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
        report.trials[j] = run_speed_trial(cfg, *coef, jobs[j].d, jobs[j].m, jobs[j].i, static_cast<int>(j));
    });
    std::vector<TrialSummary> summaries;
    for (const auto& t : report.trials) summaries.push_back(t.summary);
    report.table = aggregate_speed(summaries);
    return report;
}

namespace {

std::string comment_block(const ExperimentConfig& cfg, std::string_view title) {
    std::string out = "# stirlab " + std::string(title) + "\n# std: population\n";
    std::istringstream is(dump_config(cfg));
    std::string line;
    while (std::getline(is, line)) out += "# config " + line + "\n";
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string trials_csv(const std::string& comments, std::span<const TrialSummary> trials) {
    std::ostringstream os;
    os << comments;
    os << "trial,density,trajectory,mode,cell_trial,seed,duration_s,outcome,n_frames,mean_error,mean_confidence,"
          "final_error,final_confidence\n";
    for (const auto& t : trials) {
        os << t.id << ',' << fluidsim::to_string(t.density) << ',' << trajectory::to_string(t.trajectory) << ','
           << to_string(t.mode) << ',' << t.cell_trial << ',' << t.seed << ',' << format_double(t.duration) << ','
           << controller::to_string(t.outcome) << ',' << t.n_frames << ',' << format_double(t.mean_error) << ','
           << format_double(t.mean_confidence) << ',' << format_double(t.final_error) << ','
           << format_double(t.final_confidence) << '\n';
    }
    return os.str();
}

std::string frames_csv(const std::string& comments, std::span<const TrialResult> trials) {
    std::ostringstream os;
    os << comments;
    os << "trial,t_s,gt,tp,fp,fn,E,C,C_predict,speed,x1,x2,x3,x4,x5,x6\n";
    for (const auto& t : trials) {
        for (const auto& f : t.frames) {
            os << t.summary.id << ',' << format_double(f.t) << ',' << f.gt << ',' << f.tp << ',' << f.fp << ','
               << f.fn << ',' << f.error << ',' << format_double(f.confidence) << ','
               << (f.predicted ? format_double(*f.predicted) : std::string()) << ',' << format_double(f.speed);
            for (double x : f.features.as_array()) os << ',' << format_double(x);
            os << '\n';
        }
    }
    return os.str();
}

std::string table1_csv(const std::string& comments, const SelectionTable& table) {
    std::ostringstream os;
    os << comments;
    os << "# best_by_error " << trajectory::to_string(table.best_by_error) << '\n';
    os << "# best_by_confidence " << trajectory::to_string(table.best_by_confidence) << '\n';
    os << "density,trajectory,n_trials,mean_error,mean_confidence\n";
    for (const auto& r : table.rows) {
        os << (r.density ? fluidsim::to_string(*r.density) : std::string_view("overall")) << ','
           << trajectory::to_string(r.trajectory) << ',' << r.n_trials << ',' << format_double(r.mean_error) << ','
           << format_double(r.mean_confidence) << '\n';
    }
    return os.str();
}

std::string table2_csv(const std::string& comments, std::span<const Table2Row> rows) {
    std::ostringstream os;
    os << comments;
    os << "# failed initiations are excluded from mean and std\n";
    os << "density,mode,n_trials,n_included,n_failed_initiation,n_timed_out,mean_duration_s,std_duration_s\n";
    for (const auto& r : rows) {
        os << fluidsim::to_string(r.density) << ',' << to_string(r.mode) << ',' << r.n_trials << ',' << r.n_included
           << ',' << r.n_failed << ',' << r.n_timed_out << ','
           << (r.duration ? format_double(r.duration->mean) : std::string()) << ','
           << (r.duration ? format_double(r.duration->std) : std::string()) << '\n';
    }
    return os.str();
}

void write_curves(const fs::path& dir, const std::string& comments, std::span<const TrialSummary> trials) {
    std::vector<Density> densities;
    for (const auto& t : trials)
        if (std::find(densities.begin(), densities.end(), t.density) == densities.end()) densities.push_back(t.density);
    for (auto d : densities) {
        std::ostringstream os;
        os << comments;
        os << "trial,mode,duration_s,outcome\n";
        for (const auto& t : trials) {
            if (t.density != d) continue;
            os << t.cell_trial << ',' << to_string(t.mode) << ',' << format_double(t.duration) << ','
               << controller::to_string(t.outcome) << '\n';
        }
        write_file(dir / ("curves_" + std::string(fluidsim::to_string(d)) + ".csv"), os.str());
    }
}

std::vector<TrialSummary> summaries_of(std::span<const TrialResult> trials) {
    std::vector<TrialSummary> out;
    out.reserve(trials.size());
    for (const auto& t : trials) out.push_back(t.summary);
    return out;
}

}  // namespace

void write_selection_report(const SelectionReport& report, const ExperimentConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const auto comments = comment_block(cfg, "trajectory selection");
    write_file(dir / "trials.csv", trials_csv(comments, summaries_of(report.trials)));
    write_file(dir / "frames.csv", frames_csv(comments, report.trials));
    write_file(dir / "table1.csv", table1_csv(comments, report.table));
}

void write_speed_report(const SpeedReport& report, const ExperimentConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const auto comments = comment_block(cfg, "speed comparison");
    const auto summaries = summaries_of(report.trials);
    write_file(dir / "trials.csv", trials_csv(comments, summaries));
    write_file(dir / "frames.csv", frames_csv(comments, report.trials));
    write_file(dir / "table2.csv", table2_csv(comments, report.table));
    write_curves(dir, comments, summaries);
}

TrialsFile read_trials_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read trials file " + path.string());
    TrialsFile file;
    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (header.empty()) file.comments += line + "\n";
            continue;
        }
        const auto fields = split(line, ',');
        if (header.empty()) {
            for (auto f : fields) header.emplace_back(f);
            for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
            for (const char* need : {"trial", "density", "trajectory", "mode", "cell_trial", "seed", "duration_s",
                                     "outcome", "n_frames", "mean_error", "mean_confidence", "final_error",
                                     "final_confidence"}) {
                if (!col.count(need)) throw FormatError(path.string() + ": missing column '" + need + "'");
            }
            continue;
        }
        if (fields.size() != header.size()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields");
        }
        auto f = [&](const char* name) { return fields[col[name]]; };
        try {
            TrialSummary t;
            t.id = parse_integer<int>(f("trial"), "trial");
            t.density = fluidsim::parse_density(f("density"));
            t.trajectory = trajectory::parse_kind(f("trajectory"));
            t.mode = parse_speed_mode(f("mode"));
            t.cell_trial = parse_integer<int>(f("cell_trial"), "cell_trial");
            t.seed = parse_integer<std::uint64_t>(f("seed"), "seed");
            t.duration = parse_double(f("duration_s"), "duration_s");
            t.outcome = controller::parse_outcome(f("outcome"));
            t.n_frames = parse_integer<int>(f("n_frames"), "n_frames");
            t.mean_error = parse_double(f("mean_error"), "mean_error");
            t.mean_confidence = parse_double(f("mean_confidence"), "mean_confidence");
            t.final_error = parse_double(f("final_error"), "final_error");
            t.final_confidence = parse_double(f("final_confidence"), "final_confidence");
            file.trials.push_back(t);
        } catch (const Error& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (header.empty()) throw FormatError(path.string() + ": no header row");
    return file;
}

ExperimentMode reaggregate(const fs::path& in_dir, const fs::path& out_dir) {
    const auto file = read_trials_csv(in_dir / "trials.csv");
    if (file.trials.empty()) throw FormatError((in_dir / "trials.csv").string() + ": no trials");
    ensure_dir(out_dir);
    const bool speed = file.comments.find("# stirlab speed comparison") != std::string::npos ||
                       std::any_of(file.trials.begin(), file.trials.end(),
                                   [](const TrialSummary& t) { return t.mode == SpeedMode::Adaptive; });
    if (speed) {
        write_file(out_dir / "table2.csv", table2_csv(file.comments, aggregate_speed(file.trials)));
        write_curves(out_dir, file.comments, file.trials);
        return ExperimentMode::SpeedComparison;
    }
    write_file(out_dir / "table1.csv", table1_csv(file.comments, aggregate_selection(file.trials)));
    return ExperimentMode::TrajectorySelection;
}

ReplayResult replay(const controller::ControllerConfig& cfg, std::istream& in) {
    controller::Controller ctl(cfg);
    ReplayResult result;
    std::string line;
    std::map<std::string, std::size_t> col;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        const auto fields = split(line, ',');
        if (col.empty()) {
            for (std::size_t i = 0; i < fields.size(); ++i) col[std::string(trim(fields[i]))] = i;
            for (const char* need : {"frame", "t_s", "C"}) {
                if (!col.count(need)) throw FormatError(std::string("replay input: missing column '") + need + "'");
            }
            n_cols = fields.size();
            continue;
        }
        if (fields.size() != n_cols) {
            throw FormatError("replay input line " + std::to_string(line_no) + ": expected " + std::to_string(n_cols) +
                              " fields");
        }
        if (ctl.status() != controller::Status::Running) break;
        ReplayRow row;
        row.frame = parse_integer<int>(fields[col["frame"]], "frame");
        row.t = parse_double(fields[col["t_s"]], "t_s");
        row.confidence = parse_double(fields[col["C"]], "C");
        if (!result.rows.empty() && row.frame <= result.rows.back().frame) {
            throw FormatError("replay input line " + std::to_string(line_no) + ": frame indices must increase");
        }
        const auto d = ctl.step(row.confidence);
        row.delta_c = d.delta_c;
        row.speed = d.speed;
        row.stop = d.stop;
        result.rows.push_back(row);
    }
    if (col.empty()) throw FormatError("replay input: no header row");
    result.status = ctl.status();
    return result;
}

void write_replay(std::ostream& os, const ReplayResult& result) {
    os << "# status " << controller::to_string(result.status) << '\n';
    os << "frame,t_s,C,delta_c,speed,decision\n";
    for (const auto& r : result.rows) {
        os << r.frame << ',' << format_double(r.t) << ',' << format_double(r.confidence) << ','
           << (r.delta_c ? format_double(*r.delta_c) : std::string()) << ',' << format_double(r.speed) << ','
           << (r.stop ? "stop" : "continue") << '\n';
    }
}

}  // namespace stirlab::harness
