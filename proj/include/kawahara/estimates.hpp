#pragma once

// Named linear, Strichartz, maximal and bilinear inequalities, each checked
// as a two-resolution ratio over a deterministic family.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kawahara/bilinear.hpp"
#include "kawahara/convergence.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/families.hpp"
#include "kawahara/norms.hpp"
#include "kawahara/spacetime.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

enum class Estimate {
    linear_xsb,         // ‖η U f‖_{X_{s,1/2+ε}} ≤ C‖f‖_{H^s}
    duhamel,            // ‖η(t/T)∫₀ᵗU(t-t')g‖_{X_{s,b}} ≤ C T^{1+b'-b}‖g‖_{X_{s,b'}}
    high_l4t_l2x,       // ‖P^D u‖_{L⁴ₜL²ₓ} ≤ C‖u‖_{X_{0,b/2}}
    high_l4t_linfx,     // ‖D^{3/4}P^D u‖_{L⁴ₜL^∞ₓ} ≤ C‖u‖_{X_{0,b}}
    l12,                // ‖u‖_{L¹²} ≤ C‖u‖_{X_{0,b}}
    l4,                 // ‖u‖_{L⁴} ≤ C‖u‖_{X_{0,3b/5}}
    high_maximal_free,  // ‖P^D U(t)u0‖_{L⁴ₓL^∞ₜ} ≤ C‖u0‖_{H^{1/4}}
    high_l4_smoothing,  // ‖P^D D^{3/8}u‖_{L⁴} ≤ C‖u‖_{X_{0,b}}
    maximal_free,       // ‖U(t)u0‖_{L⁴ₓL^∞ₜ} ≤ C‖u0‖_{H^s}
    maximal_xsb,        // ‖u‖_{L⁴ₓL^∞ₜ} ≤ C‖u‖_{X_{s,b}}
    bilinear_full,      // ‖∂(uv)‖_{X_{s,b'}} ≤ C‖u‖_{X_{s,b}}‖v‖_{X_{s,b}}
    bilinear_smoothing, // ‖∂(uv)‖_{X_{s₁,b'}} ≤ C‖u‖_{X_{s₂,b}}‖v‖_{X_{s₂,b}}
};

inline constexpr std::array<Estimate, 12> all_estimates{
    Estimate::linear_xsb,        Estimate::duhamel,           Estimate::high_l4t_l2x,  Estimate::high_l4t_linfx,
    Estimate::l12,               Estimate::l4,                Estimate::high_maximal_free,
    Estimate::high_l4_smoothing, Estimate::maximal_free,      Estimate::maximal_xsb,   Estimate::bilinear_full,
    Estimate::bilinear_smoothing};

inline std::string_view to_string(Estimate e) {
    switch (e) {
        case Estimate::linear_xsb: return "linear-xsb";
        case Estimate::duhamel: return "duhamel";
        case Estimate::high_l4t_l2x: return "high-l4t-l2x";
        case Estimate::high_l4t_linfx: return "high-l4t-linfx";
        case Estimate::l12: return "l12";
        case Estimate::l4: return "l4";
        case Estimate::high_maximal_free: return "high-maximal-free";
        case Estimate::high_l4_smoothing: return "high-l4-smoothing";
        case Estimate::maximal_free: return "maximal-free";
        case Estimate::maximal_xsb: return "maximal-xsb";
        case Estimate::bilinear_full: return "bilinear-full";
        case Estimate::bilinear_smoothing: return "bilinear-smoothing";
    }
    return "?";
}

inline Estimate parse_estimate(std::string_view name) {
    for (Estimate e : all_estimates)
        if (to_string(e) == name) return e;
    throw InvalidParameters("unknown estimate '" + std::string(name) + "'");
}

struct EstimateSetup {
    ResolutionLadder ladder;
    PacketRanges ranges;
    std::size_t samples = 30;
    std::uint64_t seed = 1;
    /// Rough-data cutoff for the free maximal families.
    double max_frequency = 3.0;
    /// Space-time packets for the Duhamel family.
    double max_time_center = 0.5;
    double max_time_frequency = 4.0;
};

/// Families that resolve the estimate: high-frequency cases get carriers
/// above D and a short window fine enough to follow their motion.
inline EstimateSetup default_setup(Estimate e, std::uint64_t seed = 1) {
    EstimateSetup s;
    s.seed = seed;
    s.ladder = ResolutionLadder{8.0 * pi, 128, 2.0, 1.0 / 256.0};
    switch (e) {
        case Estimate::high_l4t_l2x:
        case Estimate::high_l4t_linfx:
        case Estimate::high_l4_smoothing:
            s.ladder = ResolutionLadder{8.0 * pi, 256, 0.125, 1.0 / 8192.0};
            s.ranges.min_carrier = 4.5;
            s.ranges.max_carrier = 5.5;
            break;
        case Estimate::maximal_free:
            s.ladder = ResolutionLadder{8.0 * pi, 128, 1.0, 1.0 / 1024.0};
            s.max_frequency = 3.0;
            break;
        case Estimate::high_maximal_free:
            s.ladder = ResolutionLadder{8.0 * pi, 128, 1.0 / 32.0, 1.0 / 32768.0};
            s.max_frequency = 6.0;
            break;
        case Estimate::duhamel:
            s.ranges.max_carrier = 0.5;
            break;
        default: break;
    }
    return s;
}

inline SpectralField1D apply_symbol(SpectralField1D f, double (*symbol)(double)) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= symbol(f.grid().xi(i));
    return f;
}

/// η(t/T)·∫₀ᵗ U(t-t')g(t')dt' on g's lattice, which must contain t = 0.
/// Trapezoid rule in the interaction picture, accumulated outward from 0.
inline SpaceTimeSamples duhamel_integral(const SpaceTimeSamples& g, double T, const DispersionParams& params) {
    const TimeLattice& lat = g.time;
    if (lat.first > 0 || lat.first + static_cast<std::int64_t>(lat.count) <= 0)
        throw InvalidInput("Duhamel lattice must contain t = 0");
    const auto origin = static_cast<std::size_t>(-lat.first);
    const std::size_t m = g.grid.points();
    const double h = lat.step;

    std::vector<SpectralField1D> pulled;
    pulled.reserve(lat.count);
    std::vector<Complex> slice(m);
    for (std::size_t l = 0; l < lat.count; ++l) {
        for (std::size_t i = 0; i < m; ++i) slice[i] = g(i, l);
        pulled.push_back(propagate(to_spectral(std::span<const Complex>(slice), g.grid), -lat.time(l), params));
    }

    SpaceTimeSamples out(g.grid, lat);
    const CutoffEta cutoff;
    auto emit = [&](std::size_t l, const SpectralField1D& acc) {
        out.set_slice(l, propagate(acc, lat.time(l), params), cutoff(lat.time(l) / T));
    };
    SpectralField1D acc(g.grid);
    emit(origin, acc);
    for (std::size_t l = origin + 1; l < lat.count; ++l) {
        for (std::size_t i = 0; i < m; ++i) acc[i] += 0.5 * h * (pulled[l - 1][i] + pulled[l][i]);
        emit(l, acc);
    }
    acc = SpectralField1D(g.grid);
    for (std::size_t l = origin; l-- > 0;) {
        for (std::size_t i = 0; i < m; ++i) acc[i] -= 0.5 * h * (pulled[l + 1][i] + pulled[l][i]);
        emit(l, acc);
    }
    return out;
}

namespace detail {

inline double high_l4t_linfx_symbol(double xi) { return std::pow(std::abs(xi), 0.75); }
inline double high_l4_symbol(double xi) { return std::pow(std::abs(xi), 0.375); }

}  // namespace detail

/// Two-resolution ratio report for one estimate. np supplies s, ε, b, b', s₁, s₂, D.
inline RatioReport check_estimate(Estimate e, const EstimateSetup& setup, const NormParams& np,
                                  const DispersionParams& params, unsigned threads = 1) {
    const ResolutionLadder& L = setup.ladder;
    const auto res = L.resolutions();
    const std::size_t n = setup.samples;
    const SpaceTimeTransform plain{.taper = false, .pad_factor = 2};
    const double D = np.D();

    auto wave = [&](const SpectralField1D& f, int level) { return tapered_free_wave(f, L.lattice(level), params); };
    auto xsb = [&](const SpaceTimeSamples& u, double s, double b) {
        return xsb_norm(to_spacetime_spectrum(u, plain), s, b, params);
    };

    switch (e) {
        case Estimate::duhamel: {
            const auto packets =
                random_spacetime_packets(setup.seed, n, setup.ranges, setup.max_time_center, setup.max_time_frequency);
            const double T = 1.0;
            return estimate_ratio(
                n, res,
                [&](std::size_t id, int level) { return spacetime_packet(packets[id], L.grid(level), L.lattice(level)); },
                [&](const SpaceTimeSamples& g) { return xsb(duhamel_integral(g, T, params), np.s(), np.b()); },
                [&](const SpaceTimeSamples& g) {
                    return std::pow(T, 1.0 + np.b_prime() - np.b()) * xsb(g, np.s(), np.b_prime());
                },
                threads);
        }
        case Estimate::linear_xsb:
        case Estimate::high_l4t_l2x:
        case Estimate::high_l4t_linfx:
        case Estimate::high_l4_smoothing:
        case Estimate::l12:
        case Estimate::l4:
        case Estimate::maximal_xsb: {
            if (e == Estimate::high_l4t_l2x || e == Estimate::high_l4t_linfx || e == Estimate::high_l4_smoothing)
                np.require_threshold(params);
            const auto profiles = random_profiles(setup.seed, n, setup.ranges);
            struct Sample {
                SpectralField1D f;
                int level;
            };
            auto lhs = [&](const Sample& x) {
                switch (e) {
                    case Estimate::linear_xsb: return xsb(wave(x.f, x.level), np.s(), 0.5 + np.epsilon());
                    case Estimate::high_l4t_l2x:
                        return mixed_norm(wave(project_high(x.f, D), x.level), 2.0, 4.0, MixedOrder::t_outer);
                    case Estimate::high_l4t_linfx:
                        return mixed_norm(wave(project_high(apply_symbol(x.f, detail::high_l4t_linfx_symbol), D), x.level),
                                          infinity, 4.0, MixedOrder::t_outer);
                    case Estimate::high_l4_smoothing:
                        return mixed_norm(wave(project_high(apply_symbol(x.f, detail::high_l4_symbol), D), x.level), 4.0,
                                          4.0, MixedOrder::x_outer);
                    case Estimate::l12: return mixed_norm(wave(x.f, x.level), 12.0, 12.0, MixedOrder::x_outer);
                    case Estimate::l4: return mixed_norm(wave(x.f, x.level), 4.0, 4.0, MixedOrder::x_outer);
                    default: return mixed_norm(wave(x.f, x.level), 4.0, infinity, MixedOrder::x_outer);
                }
            };
            auto rhs = [&](const Sample& x) {
                if (e == Estimate::linear_xsb) return sobolev_norm(x.f, np.s());
                const auto u = wave(x.f, x.level);
                switch (e) {
                    case Estimate::high_l4t_l2x: return xsb(u, 0.0, 0.5 * np.b());
                    case Estimate::l4: return xsb(u, 0.0, 0.6 * np.b());
                    case Estimate::maximal_xsb: return xsb(u, np.s(), np.b());
                    default: return xsb(u, 0.0, np.b());
                }
            };
            return estimate_ratio(
                n, res, [&](std::size_t id, int level) { return Sample{profile_field(profiles[id], L.grid(level)), level}; },
                lhs, rhs, threads);
        }
        case Estimate::maximal_free:
        case Estimate::high_maximal_free: {
            const bool high = e == Estimate::high_maximal_free;
            if (high) np.require_threshold(params);
            const double s = high ? 0.25 : np.s();
            auto lattice = [&](int level) {
                const TimeLattice w = L.lattice(level);
                return TimeLattice{w.step, 0, w.count};
            };
            auto make = [&](std::size_t id, int level) {
                const auto u0 = rough_data(
                    RoughDataSpec{.s = s, .seed = setup.seed + id, .max_frequency = setup.max_frequency},
                    L.grid(level));
                return std::pair{u0, level};
            };
            return estimate_ratio(
                n, res, make,
                [&](const auto& x) {
                    const auto& f = high ? project_high(x.first, D) : x.first;
                    return mixed_norm(free_evolution(f, lattice(x.second), params), 4.0, infinity, MixedOrder::x_outer);
                },
                [&](const auto& x) { return sobolev_norm(x.first, s); }, threads);
        }
        case Estimate::bilinear_full:
        case Estimate::bilinear_smoothing: {
            const auto profiles = random_profiles(setup.seed, 2 * n, setup.ranges);
            auto make = [&](std::size_t id, int level) {
                auto spec = [&](const Profile& p) {
                    return to_spacetime_spectrum(wave(profile_field(p, L.grid(level)), level), plain);
                };
                return std::pair{spec(profiles[2 * id]), spec(profiles[2 * id + 1])};
            };
            const auto theorem =
                e == Estimate::bilinear_full ? BilinearTheorem::full_range : BilinearTheorem::smoothing;
            return verify_estimate(theorem, n, res, make, np, params, threads);
        }
    }
    throw InvalidParameters("unhandled estimate");
}

/// Norm parameters each estimate is checked at, for ε given.
inline NormParams default_norm_params(Estimate e, double epsilon) {
    switch (e) {
        case Estimate::bilinear_full: return NormParams(-1.75 + 4.0 * epsilon, epsilon);
        case Estimate::bilinear_smoothing: return NormParams(-0.5 + epsilon, epsilon, 4.0, -0.5 + epsilon);
        case Estimate::duhamel: return NormParams(0.0, epsilon);
        default: return NormParams(0.25, epsilon);
    }
}

}  // namespace kawahara
