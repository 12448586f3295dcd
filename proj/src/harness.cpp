#include "corrbound/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "corrbound/linear_response.hpp"
#include "corrbound/path_space.hpp"
#include "corrbound/rng.hpp"

namespace corrbound {

namespace {

using nlohmann::json;

constexpr std::size_t kBoundCount = std::size(kAllBoundIds);

json metadata(const char* command, std::uint64_t seed) {
    json meta;
    meta["artifact"] = "corrbound";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["seed"] = seed;
    meta["generator"] = Xoshiro256::name;
    meta["random_model_distributions"] = kRandomModelDistributions;
    meta["ratio_slack"] = kRatioSlack;
    meta["geodesic_tolerance"] = kGeodesicTolerance;
    meta["spectral_condition_limit"] = kSpectralConditionLimit;
    return meta;
}

void write_csv_preamble(std::ostream& os, const json& meta, const char* header) {
    os << "# " << meta.dump() << '\n' << header << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::BadInput, "cannot open " + path.string() + " for writing");
    return os;
}

void finish_output(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw Error(ErrorCode::BadInput, "write to " + path.string() + " failed");
}

bool violates(double ratio) { return !(ratio <= 1.0 + kRatioSlack); }

Model fig2_model() {
    Matrix raw = Matrix::Zero(2, 2);
    raw(0, 1) = 1.0;
    Vector s(2);
    s << -1.0, 1.0;
    return Model{RateMatrix::validate(raw), ProbVector::point_mass(2, 1), ScoreVector(s), ScoreVector(s)};
}

Model fig3_model() {
    Matrix raw(2, 2);
    raw << 0.0, 1.0, 1.0, 0.0;
    const RateMatrix w = RateMatrix::validate(raw);
    Vector s(2);
    s << -1.0, 1.0;
    return Model{w, steady_state(w), ScoreVector(s), ScoreVector(s)};
}

Model random_protocol_model(Index n, std::uint64_t seed) {
    RandomModel m = random_model(n, seed);
    ScoreVector t = m.s;
    return Model{std::move(m.w), std::move(m.p0), std::move(m.s), std::move(t)};
}

json report_json(const BoundReport& r) {
    json row;
    row["bound_id"] = to_string(r.bound_id);
    row["t1"] = r.t1;
    row["t2"] = r.t2;
    row["lhs"] = r.lhs;
    row["rhs"] = r.rhs;
    row["ratio"] = r.ratio;
    row["in_domain"] = r.in_validity_domain;
    row["cmax_mode"] = to_string(r.cmax_mode);
    return row;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitInputError;
}

} // namespace

std::uint64_t model_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed ^ (index * 0x9e3779b97f4a7c15ULL);
    splitmix64(x);
    return splitmix64(x);
}

unsigned worker_threads(unsigned requested) {
    unsigned threads = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("CORRBOUND_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && value > 0) threads = std::min(threads, static_cast<unsigned>(value));
    }
    return threads;
}

std::vector<BoundReport> evaluate_bound(const Model& model, BoundId id,
                                        const std::vector<double>& t_grid, CmaxMode mode,
                                        double chi) {
    std::vector<BoundReport> out;
    if (id == BoundId::PulseEq11 || id == BoundId::StepEq12) {
        const ProbVector p_st = steady_state(model.w);
        for (double t : t_grid) {
            if (id == BoundId::PulseEq11) {
                if (t > 0.0) out.push_back(bound_pulse(model.w, p_st, model.s, model.t, chi, t, mode));
            } else {
                out.push_back(bound_step(model.w, p_st, model.s, model.t, chi, t, mode));
            }
        }
        return out;
    }

    const BoundEvaluator ev(model.w, model.p0, model.s, model.t, mode);
    const std::vector<ScoreVector> chain{model.s, model.t, model.s};
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        switch (id) {
        case BoundId::MainEq5:
            if (i > 0 && t > t_grid[i - 1]) out.push_back(ev.main(t_grid[i - 1], t));
            break;
        case BoundId::ZeroTEq6: out.push_back(ev.zero_to_t(t)); break;
        case BoundId::DerivEq7:
            if (t > 0.0) out.push_back(ev.derivative(t));
            break;
        case BoundId::EtaEq8: out.push_back(ev.eta(t)); break;
        case BoundId::TangentS29: out.push_back(ev.tangent(t)); break;
        case BoundId::MultiSinS40:
            out.push_back(ev.multipoint(chain, {0.0, 0.5 * t, t}, MultipointVariant::Sin));
            break;
        case BoundId::MultiEtaS39:
            out.push_back(ev.multipoint(chain, {0.0, 0.5 * t, t}, MultipointVariant::Eta));
            break;
        case BoundId::OnepointSinS42: out.push_back(ev.onepoint(t, OnepointVariant::Sin)); break;
        case BoundId::OnepointEtaS41: out.push_back(ev.onepoint(t, OnepointVariant::Eta)); break;
        case BoundId::OnepointActivityS45:
            out.push_back(ev.onepoint(t, OnepointVariant::Activity));
            break;
        case BoundId::PulseEq11:
        case BoundId::StepEq12: break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (config.bounds.empty()) throw Error(ErrorCode::BadInput, "select at least one bound");
        if (config.t_grid.empty()) throw Error(ErrorCode::BadInput, "time grid is empty");
        if (!std::is_sorted(config.t_grid.begin(), config.t_grid.end()) || config.t_grid.front() < 0.0)
            throw Error(ErrorCode::BadInput, "time grid must be sorted and non-negative");

        struct Entry {
            int index;
            std::uint64_t seed;
            Model model;
        };
        std::vector<Entry> models;
        if (config.model_path) {
            models.push_back({0, 0, load_model_file(*config.model_path)});
        } else {
            if (config.states.empty() || config.models < 0)
                throw Error(ErrorCode::BadInput, "need --states and a non-negative --models");
            for (int i = 0; i < config.models; ++i) {
                const int n = config.states[static_cast<std::size_t>(i) % config.states.size()];
                const std::uint64_t seed = model_seed(config.seed, static_cast<std::uint64_t>(i));
                models.push_back({i, seed, random_protocol_model(n, seed)});
            }
        }

        json meta = metadata("check", config.seed);
        meta["cmax_mode"] = to_string(config.cmax_mode);
        meta["chi"] = config.chi;
        if (config.model_path) meta["model"] = config.model_path->string();
        if (config.rhs_scale != 1.0) meta["rhs_scale"] = config.rhs_scale;

        std::vector<std::string> violations;
        json rows = json::array();
        std::ostringstream csv;
        const bool with_model_columns = !config.model_path;
        write_csv_preamble(csv, meta,
                           with_model_columns ? "model,seed,n,bound_id,t1,t2,lhs,rhs,ratio,in_domain,cmax_mode"
                                              : kBoundCsvHeader);

        for (const auto& entry : models) {
            for (BoundId id : config.bounds) {
                for (BoundReport r : evaluate_bound(entry.model, id, config.t_grid, config.cmax_mode, config.chi)) {
                    if (config.rhs_scale != 1.0) {
                        r.rhs *= config.rhs_scale;
                        r.ratio = bound_ratio(r.lhs, r.rhs);
                    }
                    if (violates(r.ratio)) {
                        std::ostringstream msg;
                        msg << "model " << entry.index << ' ' << to_csv_row(r);
                        violations.push_back(msg.str());
                    }
                    if (config.format == OutputFormat::Json) {
                        json row = report_json(r);
                        if (with_model_columns) {
                            row["model"] = entry.index;
                            row["seed"] = entry.seed;
                            row["n"] = entry.model.w.size();
                        }
                        rows.push_back(std::move(row));
                    } else {
                        if (with_model_columns)
                            csv << entry.index << ',' << entry.seed << ',' << entry.model.w.size() << ',';
                        csv << to_csv_row(r) << '\n';
                    }
                }
            }
        }

        std::string body;
        if (config.format == OutputFormat::Json) {
            json doc;
            doc["metadata"] = meta;
            doc["rows"] = std::move(rows);
            body = doc.dump(2) + "\n";
        } else {
            body = csv.str();
        }
        if (config.output_path) {
            std::ofstream os = open_output(*config.output_path);
            os << body;
            finish_output(os, *config.output_path);
        } else {
            out << body;
        }

        for (const auto& v : violations) err << "violation: " << v << '\n';
        return violations.empty() ? kExitPass : kExitViolation;
    });
}

// ---------------------------------------------------------------------------
// figure2

int cmd_figure2(const FigureConfig& config, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const std::vector<double> grid = config.t_grid.empty() ? linear_grid(0.0, 10.0, 101) : config.t_grid;
        if (config.models < 0) throw Error(ErrorCode::BadInput, "--models must be >= 0");
        std::filesystem::create_directories(config.out_dir);
        json meta = metadata("figure2", config.seed);
        bool violated = false;

        const Model fixed = fig2_model();
        const BoundEvaluator fixed_ev(fixed.w, fixed.p0, fixed.s, fixed.t);

        const auto path_a = config.out_dir / "fig2a.csv";
        const auto path_b = config.out_dir / "fig2b.csv";
        const auto path_c = config.out_dir / "fig2c.csv";
        const auto path_d = config.out_dir / "fig2d.csv";
        std::ofstream fa = open_output(path_a);
        std::ofstream fb = open_output(path_b);
        std::ofstream fc = open_output(path_c);
        std::ofstream fd = open_output(path_d);
        write_csv_preamble(fa, meta, "t,lhs,rhs_eq6,rhs_eq8,in_domain_eq6");
        write_csv_preamble(fb, meta, "t,lhs,rhs_eq7");
        write_csv_preamble(fc, meta, "model,seed,n,t,ratio,in_domain");
        write_csv_preamble(fd, meta, "model,seed,n,t,ratio");

        for (double t : grid) {
            const BoundReport sine = fixed_ev.zero_to_t(t);
            const BoundReport eta = fixed_ev.eta(t);
            fa << format_real(t) << ',' << format_real(sine.lhs) << ',' << format_real(sine.rhs) << ','
               << format_real(eta.rhs) << ',' << (sine.in_validity_domain ? 1 : 0) << '\n';
            violated = violated || violates(sine.ratio) || violates(eta.ratio);
            if (t > 0.0) {
                const BoundReport d = fixed_ev.derivative(t);
                fb << format_real(t) << ',' << format_real(d.lhs) << ',' << format_real(d.rhs) << '\n';
                violated = violated || violates(d.ratio);
            }
        }

        auto ratio_rows = [&](int index, std::uint64_t seed, const Model& model) {
            const BoundEvaluator ev(model.w, model.p0, model.s, model.t);
            for (double t : grid) {
                const BoundReport c = ev.zero_to_t(t);
                fc << index << ',' << seed << ',' << model.w.size() << ',' << format_real(t) << ','
                   << format_real(c.ratio) << ',' << (c.in_validity_domain ? 1 : 0) << '\n';
                violated = violated || violates(c.ratio);
                if (t > 0.0) {
                    const BoundReport d = ev.derivative(t);
                    fd << index << ',' << seed << ',' << model.w.size() << ',' << format_real(t) << ','
                       << format_real(d.ratio) << '\n';
                    violated = violated || violates(d.ratio);
                }
            }
        };

        ratio_rows(-1, 0, fixed);
        json model_list = json::array();
        for (int i = 0; i < config.models; ++i) {
            const Index n = 2 + i % 3;
            const std::uint64_t seed = model_seed(config.seed, static_cast<std::uint64_t>(i));
            model_list.push_back({{"index", i}, {"seed", seed}, {"n", n}});
            ratio_rows(i, seed, random_protocol_model(n, seed));
        }

        finish_output(fa, path_a);
        finish_output(fb, path_b);
        finish_output(fc, path_c);
        finish_output(fd, path_d);

        meta["fixed_model"] = {{"index", -1}, {"rates", {{0, 1}, {0, 0}}}, {"p0", {0, 1}}, {"S", {-1, 1}}};
        meta["random_models"] = std::move(model_list);
        meta["score_protocol"] = "T = S";
        const auto meta_path = config.out_dir / "fig2_meta.json";
        std::ofstream fm = open_output(meta_path);
        fm << meta.dump(2) << '\n';
        finish_output(fm, meta_path);

        if (violated) err << "figure2: a ratio exceeded 1\n";
        return violated ? kExitViolation : kExitPass;
    });
}

// ---------------------------------------------------------------------------
// figure3

int cmd_figure3(const FigureConfig& config, std::ostream& err) {
    return guarded(err, [&]() -> int {
        constexpr double chi = 0.01;
        std::vector<double> grid = config.t_grid.empty() ? linear_grid(0.0, 5.0, 501) : config.t_grid;
        std::filesystem::create_directories(config.out_dir);
        json meta = metadata("figure3", config.seed);
        meta["chi"] = chi;
        meta["model"] = {{"rates", {{0, 1}, {1, 0}}}, {"S", {-1, 1}}, {"T", {-1, 1}}};

        const Model m = fig3_model();
        bool violated = false;

        const auto path_a = config.out_dir / "fig3a.csv";
        std::ofstream fa = open_output(path_a);
        write_csv_preamble(fa, meta, kResponseCsvHeader);
        for (double t : grid) {
            if (!(t > 0.0)) continue;
            const BoundReport r = bound_pulse(m.w, m.p0, m.s, m.t, chi, t);
            const double shift = pulse_shift(m.w, m.p0, m.s, m.t, chi, t);
            fa << to_csv_row(ResponseRow{t, shift, r.rhs, r.ratio, r.in_validity_domain}) << '\n';
            violated = violated || violates(r.ratio);
        }
        finish_output(fa, path_a);

        // The step bound leaves its domain at sqrt(a t) = pi/2; with a = 1
        // that is t = pi^2 / 4, so the boundary itself is always sampled.
        const double boundary = std::numbers::pi * std::numbers::pi / 4.0;
        if (grid.empty() || (grid.front() <= boundary && boundary <= grid.back())) {
            if (std::find(grid.begin(), grid.end(), boundary) == grid.end()) grid.push_back(boundary);
            std::sort(grid.begin(), grid.end());
        }
        const auto path_b = config.out_dir / "fig3b.csv";
        std::ofstream fb = open_output(path_b);
        write_csv_preamble(fb, meta, kResponseCsvHeader);
        for (double t : grid) {
            const BoundReport r = bound_step(m.w, m.p0, m.s, m.t, chi, t);
            const double shift = step_shift(m.w, m.p0, m.s, m.t, chi, t);
            fb << to_csv_row(ResponseRow{t, shift, r.rhs, r.ratio, r.in_validity_domain}) << '\n';
            violated = violated || violates(r.ratio);
        }
        finish_output(fb, path_b);

        const auto meta_path = config.out_dir / "fig3_meta.json";
        std::ofstream fm = open_output(meta_path);
        fm << meta.dump(2) << '\n';
        finish_output(fm, meta_path);

        if (violated) err << "figure3: a ratio exceeded 1\n";
        return violated ? kExitViolation : kExitPass;
    });
}

// ---------------------------------------------------------------------------
// stress

StressResult run_stress(const StressConfig& config) {
    if (config.models < 0) throw Error(ErrorCode::BadInput, "--models must be >= 0");
    if (config.states.empty()) throw Error(ErrorCode::BadInput, "--states must not be empty");
    for (int n : config.states)
        if (n < 2) throw Error(ErrorCode::BadDimension, "stress models need n >= 2");
    const std::vector<double> grid = config.t_grid.empty() ? log_grid(1e-2, 10.0, 20) : config.t_grid;

    using Row = std::array<BoundTally, kBoundCount>;
    std::vector<Row> per_model(static_cast<std::size_t>(config.models));

    auto work = [&](std::size_t i) {
        const int n = config.states[i % config.states.size()];
        const Model model = random_protocol_model(n, model_seed(config.seed, i));
        Row& row = per_model[i];
        for (std::size_t b = 0; b < kBoundCount; ++b) {
            for (const BoundReport& r : evaluate_bound(model, kAllBoundIds[b], grid, config.cmax_mode, config.chi)) {
                BoundTally& tally = row[b];
                ++tally.evaluations;
                tally.max_ratio = std::max(tally.max_ratio, r.ratio);
                if (violates(r.ratio)) ++tally.violations;
            }
        }
    };

    const unsigned threads = std::min<unsigned>(worker_threads(config.threads),
                                                std::max(1, config.models));
    if (threads <= 1) {
        for (std::size_t i = 0; i < per_model.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(threads);
        for (unsigned k = 0; k < threads; ++k) {
            pool.emplace_back([&, k] {
                try {
                    for (std::size_t i = k; i < per_model.size(); i += threads) work(i);
                } catch (...) {
                    failures[k] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    StressResult result;
    if (per_model.empty()) return result;
    for (std::size_t b = 0; b < kBoundCount; ++b) {
        BoundTally total;
        for (const Row& row : per_model) {
            total.evaluations += row[b].evaluations;
            total.max_ratio = std::max(total.max_ratio, row[b].max_ratio);
            total.violations += row[b].violations;
        }
        result.total_violations += total.violations;
        result.tally.emplace_back(kAllBoundIds[b], total);
    }
    return result;
}

std::string stress_json(const StressConfig& config, const StressResult& result) {
    json meta = metadata("stress", config.seed);
    meta["models"] = config.models;
    meta["states"] = config.states;
    meta["cmax_mode"] = to_string(config.cmax_mode);
    meta["chi"] = config.chi;
    meta["t_grid"] = config.t_grid.empty() ? log_grid(1e-2, 10.0, 20) : config.t_grid;
    meta["score_protocol"] = "T = S";
    json tally = json::object();
    for (const auto& [id, t] : result.tally) {
        tally[to_string(id)] = {{"evaluations", t.evaluations},
                                {"max_ratio", t.max_ratio},
                                {"violations", t.violations}};
    }
    json doc;
    doc["metadata"] = std::move(meta);
    doc["tally"] = std::move(tally);
    doc["total_violations"] = result.total_violations;
    return doc.dump(2) + "\n";
}

int cmd_stress(const StressConfig& config, const std::optional<std::filesystem::path>& out_path,
               std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const StressResult result = run_stress(config);
        const std::string body = stress_json(config, result);
        if (out_path) {
            std::ofstream os = open_output(*out_path);
            os << body;
            finish_output(os, *out_path);
        } else {
            out << body;
        }
        for (const auto& [id, t] : result.tally)
            if (t.violations > 0)
                err << "violation: " << to_string(id) << " failed " << t.violations << " of "
                    << t.evaluations << " evaluations\n";
        return result.total_violations == 0 ? kExitPass : kExitViolation;
    });
}

// ---------------------------------------------------------------------------
// response

int cmd_response(const ResponseConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (config.t_grid.empty()) throw Error(ErrorCode::BadInput, "time grid is empty");
        const Model model = load_model_file(config.model_path);
        const ProbVector p_st = steady_state(model.w);

        json meta = metadata("response", 0);
        meta["model"] = config.model_path.string();
        meta["drive"] = config.drive == ResponseDrive::Pulse ? "pulse" : "step";
        meta["chi"] = config.chi;
        meta["cmax_mode"] = to_string(config.cmax_mode);

        std::ostringstream csv;
        write_csv_preamble(csv, meta, kResponseCsvHeader);
        bool violated = false;
        for (double t : config.t_grid) {
            BoundReport r;
            double shift = 0.0;
            if (config.drive == ResponseDrive::Pulse) {
                if (!(t > 0.0)) continue;
                r = bound_pulse(model.w, p_st, model.s, model.t, config.chi, t, config.cmax_mode);
                shift = pulse_shift(model.w, p_st, model.s, model.t, config.chi, t);
            } else {
                r = bound_step(model.w, p_st, model.s, model.t, config.chi, t, config.cmax_mode);
                shift = step_shift(model.w, p_st, model.s, model.t, config.chi, t);
            }
            csv << to_csv_row(ResponseRow{t, shift, r.rhs, r.ratio, r.in_validity_domain}) << '\n';
            violated = violated || violates(r.ratio);
        }
        if (config.output_path) {
            std::ofstream os = open_output(*config.output_path);
            os << csv.str();
            finish_output(os, *config.output_path);
        } else {
            out << csv.str();
        }
        return violated ? kExitViolation : kExitPass;
    });
}

} // namespace corrbound
