#pragma once

// Convergence experiments: rough power-law data, truncation error of the
// P_N-flux flow, exceedance measures of sup_t |u - u0| with their Chebyshev
// bounds, and the uniform Duhamel difference sup_x |u - U(t)u0|.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

#include "kawahara/csv.hpp"
#include "kawahara/dynamics.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/families.hpp"
#include "kawahara/norms.hpp"
#include "kawahara/parallel.hpp"
#include "kawahara/spacetime.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

enum class RoughProfile { random_phase, deterministic };

struct RoughDataSpec {
    double s = 0.25;
    double margin = 0.05;
    std::uint64_t seed = 1;
    RoughProfile profile = RoughProfile::random_phase;
    double max_frequency = 8.0;
    /// Overall factor on every coefficient.
    double amplitude = 1.0;
};

/// Coefficients a⟨ξ_k⟩^{-s-1/2-δ}e^{iθ_k} for |ξ_k| ≤ K_max, conjugate-symmetric.
/// Phases are drawn in order of |k|, so grids with the same L and different M
/// carry the same function.
inline SpectralField1D rough_data(const RoughDataSpec& spec, const GridSpec& grid) {
    if (!(spec.margin > 0.0)) throw InvalidParameters("rough data margin must be positive");
    if (!(spec.max_frequency >= 0.0)) throw InvalidParameters("K_max must be non-negative");
    if (spec.max_frequency >= grid.max_frequency())
        throw InvalidParameters("K_max must lie below the largest grid frequency");
    const double decay = -spec.s - 0.5 - spec.margin;
    std::mt19937_64 rng(spec.seed);
    auto phase = [&] { return spec.profile == RoughProfile::random_phase ? 2.0 * pi * unit_uniform(rng) : 0.0; };

    SpectralField1D u(grid);
    u.at_mode(0) = spec.amplitude * std::cos(phase());
    const auto kmax = static_cast<std::int64_t>(std::floor(spec.max_frequency / grid.frequency_step()));
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const double xi = static_cast<double>(k) * grid.frequency_step();
        const Complex c = std::polar(spec.amplitude * std::pow(bracket(xi), decay), phase());
        u.at_mode(k) = c;
        u.at_mode(-k) = std::conj(c);
    }
    return u;
}

namespace detail {

inline std::vector<std::vector<Complex>> physical_states(const Trajectory& traj) {
    std::vector<std::vector<Complex>> out;
    out.reserve(traj.states.size());
    for (const auto& u : traj.states) out.push_back(to_physical(u));
    return out;
}

inline SpaceTimeSamples difference_samples(const Trajectory& a, const Trajectory& b) {
    const GridSpec& grid = a.grid();
    const double h = a.times.size() > 1 ? a.times[1] - a.times[0] : 1.0;
    SpaceTimeSamples out(grid, TimeLattice{h, 0, a.states.size()});
    for (std::size_t l = 0; l < a.states.size(); ++l) out.set_slice(l, a.states[l] - b.states[l]);
    return out;
}

}  // namespace detail

struct TruncationPoint {
    double N = 0.0;
    double error = 0.0;
};

inline void write_truncation_csv(std::ostream& out, const std::vector<TruncationPoint>& points) {
    csv::Writer w(out, "N,error");
    for (const auto& p : points) w.row(csv::sci(p.N), csv::sci(p.error));
}

/// ‖u - u_N‖_{L⁴ₓL^∞ₜ} over the recorded times in [0, T] for each cutoff.
inline std::vector<TruncationPoint> truncation_error(const SpectralField1D& u0, const std::vector<double>& N_values,
                                                     const SolverConfig& cfg, const DispersionParams& params,
                                                     unsigned threads = 1) {
    for (std::size_t i = 1; i < N_values.size(); ++i)
        if (!(N_values[i] > N_values[i - 1])) throw InvalidParameters("N values must be increasing");
    if (cfg.steps() % cfg.record_every != 0) throw InvalidParameters("record_every must divide the step count");
    const Trajectory full = solve(u0, cfg, params);
    std::vector<TruncationPoint> out(N_values.size());
    parallel_for(N_values.size(), threads, [&](std::size_t i) {
        const Trajectory cut = solve_truncated(u0, N_values[i], cfg, params);
        out[i] = {N_values[i], mixed_norm(detail::difference_samples(full, cut), 4.0, infinity, MixedOrder::x_outer)};
    });
    return out;
}

struct ExceedanceReport {
    double t_max = 0.0;
    std::vector<double> lambdas;
    /// dx · #{x_j : max over stored t ∈ (0, t_max] of |u - u0| > λ}
    std::vector<double> measures;
    std::vector<double> bounds;
    /// Cutoff attaining each bound.
    std::vector<double> best_cutoff;
};

inline void write_exceedance_csv(std::ostream& out, const std::vector<ExceedanceReport>& reports) {
    csv::Writer w(out, "t_max,lambda,measure,chebyshev_bound");
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.lambdas.size(); ++i)
            w.row(csv::sci(r.t_max), csv::sci(r.lambdas[i]), csv::sci(r.measures[i]), csv::sci(r.bounds[i]));
}

struct PointwiseOptions {
    std::vector<double> t_max;
    std::vector<double> lambdas;
    /// Cutoffs N over which the Chebyshev bound is minimised.
    std::vector<double> cutoffs;
};

/// Exceedance measures for each t_max from one trajectory on (0, max t_max].
///
/// |u - u0| ≤ |u - u_N| + |u_N - P_N u0| + |P^N u0| splits every exceedance
/// at λ into three at λ/3, and Chebyshev bounds those by
/// (3/λ)⁴‖S₁‖⁴_{L⁴} + (3/λ)²‖S₂‖²_{L²} + (3/λ)²‖P^N u0‖²_{L²}, with S₁, S₂ the
/// sups over the same stored times. The bound is minimised over the cutoffs.
/// Fewest stored solver steps allowed in a window (0, t_max].
inline constexpr std::size_t min_window_samples = 64;

inline std::vector<ExceedanceReport> pointwise_experiment(const SpectralField1D& u0, const PointwiseOptions& opts,
                                                          SolverConfig cfg, const DispersionParams& params,
                                                          unsigned threads = 1) {
    if (opts.t_max.empty() || opts.lambdas.empty() || opts.cutoffs.empty())
        throw InvalidParameters("pointwise experiment needs t_max values, lambdas and cutoffs");
    for (double l : opts.lambdas)
        if (!(l > 0.0)) throw InvalidParameters("lambda must be positive");
    const double horizon = *std::max_element(opts.t_max.begin(), opts.t_max.end());
    cfg.T = horizon;
    cfg.record_every = 1;
    const std::size_t steps = cfg.steps();
    std::vector<std::size_t> last_step;
    for (double t : opts.t_max) {
        const double n = std::round(t / cfg.dt);
        if (!(t > 0.0) || std::abs(n * cfg.dt - t) > 1e-9 * t)
            throw InvalidParameters("every t_max must be a positive multiple of dt");
        if (n < static_cast<double>(min_window_samples))
            throw InvalidParameters("every t_max window needs at least 64 solver steps");
        last_step.push_back(static_cast<std::size_t>(n));
    }

    const GridSpec& grid = u0.grid();
    const std::size_t m = grid.points();
    const double dx = grid.dx();
    const auto x0 = to_physical(u0);
    const auto full = detail::physical_states(solve(u0, cfg, params));

    // Running sup over steps 1..n of |a_n - b_n| at each x, snapshotted at each t_max.
    auto sup_profiles = [&](auto&& diff) {
        std::vector<std::vector<double>> snaps(last_step.size(), std::vector<double>(m, 0.0));
        std::vector<double> run(m, 0.0);
        for (std::size_t n = 1; n <= steps; ++n) {
            for (std::size_t i = 0; i < m; ++i) run[i] = std::max(run[i], diff(n, i));
            for (std::size_t q = 0; q < last_step.size(); ++q)
                if (last_step[q] == n) snaps[q] = run;
        }
        return snaps;
    };

    const auto measured = sup_profiles([&](std::size_t n, std::size_t i) { return std::abs(full[n][i] - x0[i]); });

    struct CutoffTerms {
        std::vector<double> l4_pow4, l2_sq;  // per t_max
        double tail_sq = 0.0;
    };
    std::vector<CutoffTerms> terms(opts.cutoffs.size());
    parallel_for(opts.cutoffs.size(), threads, [&](std::size_t c) {
        const double N = opts.cutoffs[c];
        const auto cut = detail::physical_states(solve_truncated(u0, N, cfg, params));
        const auto low0 = to_physical(project_low(u0, N));
        const auto s1 = sup_profiles([&](std::size_t n, std::size_t i) { return std::abs(full[n][i] - cut[n][i]); });
        const auto s2 = sup_profiles([&](std::size_t n, std::size_t i) { return std::abs(cut[n][i] - low0[i]); });
        CutoffTerms& t = terms[c];
        for (std::size_t q = 0; q < last_step.size(); ++q) {
            double a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                a += std::pow(s1[q][i], 4);
                b += s2[q][i] * s2[q][i];
            }
            t.l4_pow4.push_back(a * dx);
            t.l2_sq.push_back(b * dx);
        }
        const auto high0 = to_physical(project_high(u0, N));
        for (const auto& v : high0) t.tail_sq += std::norm(v) * dx;
    });

    std::vector<ExceedanceReport> reports;
    for (std::size_t q = 0; q < last_step.size(); ++q) {
        ExceedanceReport r;
        r.t_max = opts.t_max[q];
        r.lambdas = opts.lambdas;
        for (double lambda : opts.lambdas) {
            const std::size_t count = static_cast<std::size_t>(
                std::count_if(measured[q].begin(), measured[q].end(), [&](double v) { return v > lambda; }));
            r.measures.push_back(dx * static_cast<double>(count));
            const double k = 3.0 / lambda;
            double best = infinity;
            double best_n = opts.cutoffs.front();
            for (std::size_t c = 0; c < opts.cutoffs.size(); ++c) {
                const double b = std::pow(k, 4) * terms[c].l4_pow4[q] + k * k * (terms[c].l2_sq[q] + terms[c].tail_sq);
                if (b < best) {
                    best = b;
                    best_n = opts.cutoffs[c];
                }
            }
            r.bounds.push_back(best);
            r.best_cutoff.push_back(best_n);
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

struct UniformPoint {
    double t = 0.0;
    double sup_diff = 0.0;
};

inline void write_uniform_csv(std::ostream& out, const std::vector<UniformPoint>& points) {
    csv::Writer w(out, "t,sup_diff");
    for (const auto& p : points) w.row(csv::sci(p.t), csv::sci(p.sup_diff));
}

/// sup_x |u(t) - U(t)u0| on the physical grid for each t in the ladder.
inline std::vector<UniformPoint> uniform_experiment(const SpectralField1D& u0, const std::vector<double>& t_ladder,
                                                    SolverConfig cfg, const DispersionParams& params) {
    if (t_ladder.empty()) throw InvalidParameters("t ladder must be nonempty");
    std::vector<std::size_t> idx;
    double horizon = 0.0;
    for (double t : t_ladder) {
        const double n = std::round(t / cfg.dt);
        if (t < 0.0 || std::abs(n * cfg.dt - t) > 1e-9 * std::max(t, cfg.dt))
            throw InvalidParameters("every t must be a non-negative multiple of dt");
        idx.push_back(static_cast<std::size_t>(n));
        horizon = std::max(horizon, t);
    }
    std::vector<UniformPoint> out;
    if (horizon == 0.0) {
        for (double t : t_ladder) out.push_back({t, 0.0});
        return out;
    }
    cfg.T = horizon;
    cfg.record_every = 1;
    const Trajectory traj = solve(u0, cfg, params);
    for (std::size_t q = 0; q < t_ladder.size(); ++q) {
        const double t = traj.times[idx[q]];
        const auto diff = to_physical(traj.states[idx[q]] - propagate(u0, t, params));
        double sup = 0.0;
        for (const auto& v : diff) sup = std::max(sup, std::abs(v));
        out.push_back({t_ladder[q], sup});
    }
    return out;
}

/// Least-squares slope of log(value) against log(t), skipping t = 0.
inline double loglog_slope(const std::vector<UniformPoint>& points) {
    std::vector<double> x, y;
    for (const auto& p : points)
        if (p.t > 0.0 && p.sup_diff > 0.0) {
            x.push_back(std::log(p.t));
            y.push_back(std::log(p.sup_diff));
        }
    if (x.size() < 2) throw InvalidInput("slope fit needs at least two positive points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

/// ‖U(t)u0‖_{L⁴ₓL^∞ₜ} over t ∈ [0, window] divided by ‖u0‖_{H^s}.
inline double maximal_ratio(const SpectralField1D& u0, double s, const TimeLattice& lattice,
                            const DispersionParams& params) {
    const double rhs = sobolev_norm(u0, s);
    if (rhs == 0.0) return 0.0;
    const SpaceTimeSamples samples = free_evolution(u0, lattice, params);
    return mixed_norm(samples, 4.0, infinity, MixedOrder::x_outer) / rhs;
}

/// Maximal-function ratio over a family at two resolutions. make(id, level)
/// returns the datum on ladder.grid(level); times come from lattice(level).
template <class Make>
RatioReport maximal_check(std::size_t count, Make&& make, const std::array<TimeLattice, 2>& lattices,
                          std::array<std::size_t, 2> resolutions, const NormParams& np,
                          const DispersionParams& params, unsigned threads = 1) {
    if (np.s() < 0.25 - 1e-12) throw InvalidParameters("maximal estimate needs s >= 1/4");
    struct Sample {
        SpectralField1D u0;
        TimeLattice lattice;
    };
    return estimate_ratio(
        count, resolutions,
        [&](std::size_t id, int level) { return Sample{make(id, level), lattices[static_cast<std::size_t>(level)]}; },
        [&](const Sample& x) {
            return mixed_norm(free_evolution(x.u0, x.lattice, params), 4.0, infinity, MixedOrder::x_outer);
        },
        [&](const Sample& x) { return sobolev_norm(x.u0, np.s()); }, threads);
}

}  // namespace kawahara
