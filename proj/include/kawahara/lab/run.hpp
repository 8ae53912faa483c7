#pragma once

// Experiment orchestration: validate the whole config up front, dispatch to
// the owning module, write CSVs into the output directory and a
// manifest.json describing the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "kawahara/bilinear.hpp"
#include "kawahara/convergence.hpp"
#include "kawahara/csv.hpp"
#include "kawahara/dynamics.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/estimates.hpp"
#include "kawahara/families.hpp"
#include "kawahara/lab/config.hpp"
#include "kawahara/lab/plot.hpp"
#include "kawahara/norms.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara::lab {

struct RunManifest {
    std::string run_id;
    Kind kind = Kind::solve;
    std::map<std::string, std::string> config;
    double b = 0.0, b_prime = 0.0, s1 = 0.0;
    std::vector<std::string> artifacts;
    bool completed = false;
    std::string reason;
    double wall_time = 0.0;
    bool exploratory = false;
    nlohmann::ordered_json results = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["run_id"] = run_id;
        j["kind"] = std::string(to_string(kind));
        j["status"] = completed ? "completed" : "failed";
        if (!completed) j["reason"] = reason;
        j["config"] = config;
        j["derived"] = {{"b", b}, {"b_prime", b_prime}, {"s1", s1}};
        j["artifacts"] = artifacts;
        j["wall_time"] = wall_time;
        if (exploratory) j["exploratory"] = true;
        j["results"] = results;
        return j;
    }
};

/// Typed view of a validated config.
struct Prepared {
    Kind kind = Kind::solve;
    DispersionParams params{1.0, 0.0};
    std::optional<GridSpec> grid;
    SolverConfig solver;
    std::optional<NormParams> np;
    std::optional<SpectralField1D> data;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string make_run_id(std::string_view canonical) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
    char hash[16];
    std::snprintf(hash, sizeof hash, "%08llx", static_cast<unsigned long long>(fnv1a(canonical) & 0xffffffffull));
    return std::string(stamp) + "-" + hash;
}

inline SpectralField1D make_data(const ExperimentConfig& cfg, const GridSpec& grid) {
    const std::string& kind = cfg.text("data");
    if (kind == "zero") return SpectralField1D(grid);
    if (kind == "rough") {
        RoughDataSpec spec;
        spec.s = cfg.number("s");
        spec.margin = cfg.number("data_margin");
        spec.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
        spec.max_frequency = cfg.number("data_kmax");
        spec.amplitude = cfg.number("data_amplitude");
        const std::string& profile = cfg.text("data_profile");
        if (profile == "random-phase") spec.profile = RoughProfile::random_phase;
        else if (profile == "deterministic") spec.profile = RoughProfile::deterministic;
        else throw InvalidParameters("data_profile must be random-phase or deterministic");
        return rough_data(spec, grid);
    }
    if (kind == "packets") {
        std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("seed")));
        Profile p = random_profile(rng, PacketRanges{});
        for (auto& k : p) k.amplitude *= cfg.number("data_amplitude");
        return profile_field(p, grid);
    }
    throw InvalidParameters("data must be zero, rough or packets");
}

inline void require_multiples(const std::vector<double>& times, double dt, const char* key, bool allow_zero) {
    for (double t : times) {
        const double n = std::round(t / dt);
        if (t < 0.0 || (!allow_zero && t == 0.0) || std::abs(n * dt - t) > 1e-9 * std::max(t, dt))
            throw InvalidParameters(std::string(key) + " entries must be " + (allow_zero ? "non-negative" : "positive") +
                                    " multiples of dt");
    }
}

inline bool uses_grid(Kind k) {
    return k == Kind::solve || k == Kind::converge_pointwise || k == Kind::converge_uniform || k == Kind::truncate;
}

}  // namespace detail

/// Checks every module precondition the chosen kind will meet; throws InvalidParameters.
inline Prepared validate(Kind kind, const ExperimentConfig& cfg) {
    if (cfg.has("kind") && parse_kind(cfg.text("kind")) != kind)
        throw InvalidParameters("config kind '" + cfg.text("kind") + "' does not match requested kind '" +
                                std::string(to_string(kind)) + "'");
    Prepared p;
    p.kind = kind;
    p.params = DispersionParams(cfg.number("alpha"), cfg.number("beta"));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.np.emplace(cfg.number("s"), cfg.number("epsilon"), cfg.number("D"), cfg.number_or("s2", nan),
                 cfg.number_or("b", nan));

    p.solver.dt = cfg.number("dt");
    p.solver.T = cfg.number("T");
    p.solver.record_every = cfg.count("record_every");
    p.solver.dealias = cfg.flag("dealias");
    p.solver.nonlinear = cfg.flag("nonlinear");
    p.solver.epsilon = cfg.number("epsilon");

    if (detail::uses_grid(kind)) {
        const auto M = cfg.integer("M");
        if (M < 8) throw InvalidParameters("points M must be a power of two >= 8");
        p.grid.emplace(cfg.number("L"), static_cast<std::size_t>(M));
        p.data = detail::make_data(cfg, *p.grid);
    }

    switch (kind) {
        case Kind::solve:
        case Kind::truncate: {
            const std::size_t steps = p.solver.steps();
            if (kind == Kind::truncate) {
                if (steps % p.solver.record_every != 0)
                    throw InvalidParameters("record_every must divide the step count");
                const auto cut = cfg.list("cutoffs");
                for (std::size_t i = 0; i < cut.size(); ++i)
                    if (cut[i] < 0.0 || (i > 0 && !(cut[i] > cut[i - 1])))
                        throw InvalidParameters("cutoffs must be non-negative and increasing");
            }
            break;
        }
        case Kind::verify_bilinear: {
            const std::string& th = cfg.text("theorem");
            if (th != "full-range" && th != "smoothing")
                throw InvalidParameters("theorem must be full-range or smoothing");
            require_hypotheses(th == "full-range" ? BilinearTheorem::full_range : BilinearTheorem::smoothing, *p.np);
            cfg.count("samples");
            break;
        }
        case Kind::counterexample: {
            const auto density = cfg.integer("density");
            require_scan_ladders(cfg.list("s_values"), cfg.list("N_values"), static_cast<int>(density));
            break;
        }
        case Kind::converge_pointwise: {
            detail::require_multiples(cfg.list("t_max"), p.solver.dt, "t_max", false);
            for (double t : cfg.list("t_max"))
                if (std::round(t / p.solver.dt) < static_cast<double>(min_window_samples))
                    throw InvalidParameters("every t_max window needs at least 64 solver steps");
            for (double f : cfg.list("lambda_fractions"))
                if (!(f > 0.0)) throw InvalidParameters("lambda_fractions must be positive");
            for (double c : cfg.list("bound_cutoffs"))
                if (c < 0.0) throw InvalidParameters("bound_cutoffs must be non-negative");
            break;
        }
        case Kind::converge_uniform:
            detail::require_multiples(cfg.list("t_values"), p.solver.dt, "t_values", true);
            break;
        case Kind::strichartz_check: {
            cfg.count("samples");
            const std::string& name = cfg.text("estimate");
            if (name != "all") {
                const Estimate e = parse_estimate(name);
                if (e == Estimate::bilinear_full) require_hypotheses(BilinearTheorem::full_range, *p.np);
                if (e == Estimate::bilinear_smoothing) require_hypotheses(BilinearTheorem::smoothing, *p.np);
                if (e == Estimate::maximal_free && p.np->s() < 0.25)
                    throw InvalidParameters("maximal estimate needs s >= 1/4");
            }
            break;
        }
    }
    return p;
}

namespace detail {

class ArtifactSink {
public:
    ArtifactSink(std::filesystem::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {}

    template <class Write>
    std::filesystem::path csv(const std::string& name, Write&& write) {
        const auto path = dir_ / name;
        {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            write(out);
        }
        manifest_.artifacts.push_back(name);
        return path;
    }

    void plot(const std::filesystem::path& csv_path, PlotKind kind) {
        const auto svg = emit_plot(csv_path, kind);
        manifest_.artifacts.push_back(svg.filename().string());
    }

private:
    std::filesystem::path dir_;
    RunManifest& manifest_;
};

inline double sup_abs(const SpectralField1D& u) {
    double m = 0.0;
    for (const auto& v : to_physical(u)) m = std::max(m, std::abs(v));
    return m;
}

inline nlohmann::ordered_json report_json(const RatioReport& r) {
    return {{"max_ratio_coarse", r.max_ratio[0]},
            {"max_ratio_fine", r.max_ratio[1]},
            {"slope", r.slope},
            {"skipped", r.skipped}};
}

inline void execute(const Prepared& p, const ExperimentConfig& cfg, ArtifactSink& sink, RunManifest& m,
                    unsigned threads, bool plots) {
    switch (p.kind) {
        case Kind::solve: {
            const auto traj = solve(*p.data, p.solver, p.params);
            const auto path = sink.csv("trajectory.csv", [&](std::ostream& o) { traj.write_csv(o); });
            const double l2_0 = l2_norm(traj.states.front());
            const double l2_1 = l2_norm(traj.states.back());
            m.results["final_time"] = traj.times.back();
            m.results["l2_initial"] = l2_0;
            m.results["l2_final"] = l2_1;
            m.results["mean_drift"] = std::abs(mean_mode(traj.states.back()) - mean_mode(traj.states.front()));
            if (plots) sink.plot(path, PlotKind::field_snapshot);
            break;
        }
        case Kind::verify_bilinear: {
            const bool full = cfg.text("theorem") == "full-range";
            const Estimate e = full ? Estimate::bilinear_full : Estimate::bilinear_smoothing;
            auto setup = default_setup(e, static_cast<std::uint64_t>(cfg.integer("seed")));
            setup.samples = cfg.count("samples");
            const auto r = check_estimate(e, setup, *p.np, p.params, threads);
            sink.csv("ratios.csv", [&](std::ostream& o) { r.write_csv(o); });
            m.results = report_json(r);
            break;
        }
        case Kind::counterexample: {
            const auto table = sharpness_scan(cfg.list("s_values"), cfg.list("N_values"), *p.np, p.params,
                                              static_cast<int>(cfg.integer("density")), threads);
            sink.csv("slopes.csv", [&](std::ostream& o) { table.write_csv(o); });
            const auto points = sink.csv("points.csv", [&](std::ostream& o) { table.write_points_csv(o); });
            auto rows = nlohmann::ordered_json::array();
            for (const auto& r : table.rows)
                rows.push_back({{"s", r.s}, {"slope", r.slope}, {"expected_slope", r.expected_slope}, {"noisy", r.noisy}});
            m.results["rows"] = rows;
            m.results["noisy_fits"] = table.noisy_count();
            if (plots) sink.plot(points, PlotKind::loglog_slope);
            break;
        }
        case Kind::converge_pointwise: {
            const double top = sup_abs(*p.data);
            PointwiseOptions opts;
            opts.t_max = cfg.list("t_max");
            for (double f : cfg.list("lambda_fractions")) opts.lambdas.push_back(f * top);
            opts.cutoffs = cfg.list("bound_cutoffs");
            const auto reports = pointwise_experiment(*p.data, opts, p.solver, p.params, threads);
            const auto path = sink.csv("exceedance.csv", [&](std::ostream& o) { write_exceedance_csv(o, reports); });
            bool bounded = true;
            for (const auto& r : reports)
                for (std::size_t i = 0; i < r.lambdas.size(); ++i) bounded = bounded && r.measures[i] <= r.bounds[i];
            m.results["sup_u0"] = top;
            m.results["chebyshev_satisfied"] = bounded;
            m.exploratory = p.np->s() < 0.25;
            if (plots) sink.plot(path, PlotKind::ladder_decay);
            break;
        }
        case Kind::converge_uniform: {
            const auto pts = uniform_experiment(*p.data, cfg.list("t_values"), p.solver, p.params);
            const auto path = sink.csv("uniform.csv", [&](std::ostream& o) { write_uniform_csv(o, pts); });
            m.results["slope"] = loglog_slope(pts);
            if (plots) sink.plot(path, PlotKind::ladder_decay);
            break;
        }
        case Kind::truncate: {
            const auto pts = truncation_error(*p.data, cfg.list("cutoffs"), p.solver, p.params, threads);
            const auto path = sink.csv("truncation.csv", [&](std::ostream& o) { write_truncation_csv(o, pts); });
            m.results["first"] = pts.front().error;
            m.results["last"] = pts.back().error;
            if (plots) sink.plot(path, PlotKind::ladder_decay);
            break;
        }
        case Kind::strichartz_check: {
            const std::string& name = cfg.text("estimate");
            std::vector<Estimate> list;
            if (name == "all") list.assign(all_estimates.begin(), all_estimates.end());
            else list.push_back(parse_estimate(name));
            struct Row {
                Estimate e;
                RatioReport r;
            };
            std::vector<Row> rows;
            for (Estimate e : list) {
                auto setup = default_setup(e, static_cast<std::uint64_t>(cfg.integer("seed")));
                setup.samples = cfg.count("samples");
                const NormParams np = name == "all" ? default_norm_params(e, p.np->epsilon()) : *p.np;
                rows.push_back({e, check_estimate(e, setup, np, p.params, threads)});
                sink.csv("ratios_" + std::string(to_string(e)) + ".csv",
                         [&](std::ostream& o) { rows.back().r.write_csv(o); });
                m.results[std::string(to_string(e))] = report_json(rows.back().r);
            }
            sink.csv("summary.csv", [&](std::ostream& o) {
                csv::Writer w(o, "estimate,max_ratio_coarse,max_ratio_fine,slope");
                for (const auto& row : rows)
                    w.row(std::string(to_string(row.e)), csv::sci(row.r.max_ratio[0]), csv::sci(row.r.max_ratio[1]),
                          csv::sci(row.r.slope, csv::slope_precision));
            });
            break;
        }
    }
}

}  // namespace detail

/// Runs a validated experiment. Module failures produce a failed manifest and
/// keep any artifacts already written; validation errors propagate.
inline RunManifest run(Kind kind, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                       unsigned threads = 1, bool plots = false) {
    const auto start = std::chrono::steady_clock::now();
    const Prepared p = validate(kind, cfg);

    RunManifest m;
    m.kind = kind;
    m.config = cfg.values();
    m.config["kind"] = std::string(to_string(kind));
    m.run_id = detail::make_run_id(std::string(to_string(kind)) + "\n" + cfg.canonical());
    m.b = p.np->b();
    m.b_prime = p.np->b_prime();
    m.s1 = p.np->s1();

    std::filesystem::create_directories(out_dir);
    detail::ArtifactSink sink(out_dir, m);
    try {
        detail::execute(p, cfg, sink, m, threads, plots);
        m.completed = true;
    } catch (const std::exception& e) {
        m.completed = false;
        m.reason = e.what();
    }
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream(out_dir / "manifest.json", std::ios::binary) << m.to_json().dump(2) << '\n';
    return m;
}

}  // namespace kawahara::lab
