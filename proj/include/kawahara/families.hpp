#pragma once

// Deterministic test-field families for the estimate checks. Every member
// is defined analytically (Gaussian wave packets), so the same member can be
// sampled on any lattice; only the resolution changes between levels.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kawahara/spacetime.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
/// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

/// Re[a e^{iθ} exp(-(x-x₀)²/(2w²)) e^{icx}].
struct Packet {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
    double carrier = 0.0;
    double phase = 0.0;
};

using Profile = std::vector<Packet>;

struct PacketRanges {
    double max_center = 4.0;
    double min_width = 2.0;
    double max_width = 4.0;
    double max_carrier = 1.0;
    std::size_t max_packets = 3;
    /// Carriers have |c| in [min_carrier, max_carrier].
    double min_carrier = 0.0;
};

inline Profile random_profile(std::mt19937_64& rng, const PacketRanges& r) {
    const auto count = 1 + static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(r.max_packets));
    Profile p;
    for (std::size_t n = 0; n < count; ++n) {
        Packet k;
        k.amplitude = uniform_in(rng, 0.5, 1.5);
        k.center = uniform_in(rng, -r.max_center, r.max_center);
        k.width = uniform_in(rng, r.min_width, r.max_width);
        const double c = uniform_in(rng, -1.0, 1.0);
        k.carrier = std::copysign(r.min_carrier + std::abs(c) * (r.max_carrier - r.min_carrier), c);
        k.phase = uniform_in(rng, 0.0, 2.0 * pi);
        p.push_back(k);
    }
    return p;
}

inline std::vector<Profile> random_profiles(std::uint64_t seed, std::size_t count, const PacketRanges& r) {
    std::mt19937_64 rng(seed);
    std::vector<Profile> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(random_profile(rng, r));
    return out;
}

/// Exact continuous transform of the profile sampled on the grid's frequency lattice.
inline SpectralField1D profile_field(const Profile& profile, const GridSpec& grid) {
    SpectralField1D u(grid);
    for (std::size_t i = 0; i < grid.points(); ++i) {
        const double xi = grid.xi(i);
        Complex acc{};
        for (const Packet& k : profile) {
            auto packet_hat = [&](double q) {
                const double d = q - k.carrier;
                return k.width * std::exp(-0.5 * k.width * k.width * d * d) * std::polar(1.0, k.phase - d * k.center);
            };
            acc += 0.5 * k.amplitude * (packet_hat(xi) + std::conj(packet_hat(-xi)));
        }
        u[i] = acc;
    }
    return u.enforce_real();
}

/// Space and time refinement ladder: level 1 doubles M and halves h on the
/// same domain and window [-W, W). Even sample counts keep the padded
/// transform at twice the window.
struct ResolutionLadder {
    double half_length = 8.0 * pi;
    std::size_t points = 128;
    double half_window = 2.0;
    double step = 1.0 / 128.0;

    GridSpec grid(int level) const { return GridSpec(half_length, points << level); }
    TimeLattice lattice(int level) const {
        const double h = step / static_cast<double>(1 << level);
        const auto n = static_cast<std::int64_t>(std::llround(half_window / h));
        return TimeLattice{h, -n, static_cast<std::size_t>(2 * n)};
    }
    std::array<std::size_t, 2> resolutions() const { return {points, points << 1}; }
};

/// η(2t/W)·U(t)f on [-W, W]: the taper reaches zero exactly at the window ends.
inline SpaceTimeSamples tapered_free_wave(const SpectralField1D& f, const TimeLattice& lattice,
                                          const DispersionParams& params) {
    SpaceTimeSamples out(f.grid(), lattice);
    const double W = -lattice.time(0);
    const CutoffEta cutoff;
    for (std::size_t l = 0; l < lattice.count; ++l) {
        const double t = lattice.time(l);
        out.set_slice(l, propagate(f, t, params), cutoff(2.0 * t / W));
    }
    return out;
}

/// Untapered U(t)f on the lattice.
inline SpaceTimeSamples free_evolution(const SpectralField1D& f, const TimeLattice& lattice,
                                       const DispersionParams& params) {
    SpaceTimeSamples out(f.grid(), lattice);
    for (std::size_t l = 0; l < lattice.count; ++l) out.set_slice(l, propagate(f, lattice.time(l), params));
    return out;
}

/// Space-time packet Re[a e^{iθ} exp(-(x-x₀)²/(2w²) - (t-t₀)²/(2w_t²)) e^{i(cx + ωt)}].
struct SpaceTimePacket {
    Packet space;
    double time_center = 0.0;
    double time_width = 0.5;
    double frequency = 0.0;
};

inline std::vector<SpaceTimePacket> random_spacetime_packets(std::uint64_t seed, std::size_t count,
                                                             const PacketRanges& r, double max_time_center,
                                                             double max_frequency) {
    std::mt19937_64 rng(seed);
    std::vector<SpaceTimePacket> out;
    for (std::size_t n = 0; n < count; ++n) {
        SpaceTimePacket p;
        PacketRanges one = r;
        one.max_packets = 1;
        p.space = random_profile(rng, one).front();
        p.time_center = uniform_in(rng, -max_time_center, max_time_center);
        p.time_width = uniform_in(rng, 0.2, 0.4);
        p.frequency = uniform_in(rng, -max_frequency, max_frequency);
        out.push_back(p);
    }
    return out;
}

inline SpaceTimeSamples spacetime_packet(const SpaceTimePacket& p, const GridSpec& grid, const TimeLattice& lattice) {
    SpaceTimeSamples out(grid, lattice);
    const double L = grid.half_length();
    for (std::size_t i = 0; i < grid.points(); ++i) {
        // Nearest periodic image of the packet centre.
        double dx = grid.x(i) - p.space.center;
        dx -= 2.0 * L * std::nearbyint(dx / (2.0 * L));
        const double sx = dx / p.space.width;
        for (std::size_t l = 0; l < lattice.count; ++l) {
            const double t = lattice.time(l);
            const double st = (t - p.time_center) / p.time_width;
            const double env = p.space.amplitude * std::exp(-0.5 * (sx * sx + st * st));
            out(i, l) = env * std::cos(p.space.carrier * (p.space.center + dx) + p.frequency * t + p.space.phase);
        }
    }
    return out;
}

}  // namespace kawahara
