#pragma once

// Space-time sample arrays and their (ξ, τ) spectra.
//
// Time samples sit on the integer lattice t_l = (first + l)·h, so a window
// may be centred at any multiple of h. The 2-D transform mirrors the 1-D
// convention with the 1/(2π) normalization:
//   F(ξ_k, τ_j) = dx·h/(2π) Σ u(x_i, t_l) exp(-i(x_i ξ_k + t_l τ_j)),
// τ_j = j·2π/(count·h), Σ dξ dτ |F|² = Σ dx h |u|².
// Arrays are space-major: element (i, l) lives at i·count + l.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kawahara/errors.hpp"
#include "kawahara/fft.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

struct TimeLattice {
    double step = 1.0;
    std::int64_t first = 0;
    std::size_t count = 0;

    double time(std::size_t l) const noexcept {
        return static_cast<double>(first + static_cast<std::int64_t>(l)) * step;
    }
    double period() const noexcept { return step * static_cast<double>(count); }
    double frequency_step() const noexcept { return 2.0 * pi / period(); }

    std::int64_t mode(std::size_t j) const noexcept {
        const auto jj = static_cast<std::int64_t>(j);
        const auto n = static_cast<std::int64_t>(count);
        return jj < n / 2 ? jj : jj - n;
    }
    double tau(std::size_t j) const noexcept { return static_cast<double>(mode(j)) * frequency_step(); }

    friend bool operator==(const TimeLattice&, const TimeLattice&) = default;
};

/// Symmetric lattice t = -half_span … +half_span with the given step.
inline TimeLattice symmetric_lattice(double half_span, double step) {
    if (!(step > 0.0) || !(half_span > 0.0)) throw InvalidParameters("time lattice needs positive step and span");
    const auto n = static_cast<std::int64_t>(std::llround(half_span / step));
    return TimeLattice{step, -n, static_cast<std::size_t>(2 * n + 1)};
}

struct SpaceTimeSamples {
    GridSpec grid;
    TimeLattice time;
    std::vector<Complex> values;

    SpaceTimeSamples(GridSpec g, TimeLattice t) : grid(g), time(t), values(g.points() * t.count) {}

    Complex& operator()(std::size_t i, std::size_t l) noexcept { return values[i * time.count + l]; }
    Complex operator()(std::size_t i, std::size_t l) const noexcept { return values[i * time.count + l]; }

    /// Fill time slice l from one spatial field.
    void set_slice(std::size_t l, const SpectralField1D& field, double weight = 1.0) {
        const auto phys = to_physical(field);
        for (std::size_t i = 0; i < grid.points(); ++i) (*this)(i, l) = weight * phys[i];
    }
};

class SpaceTimeSpectrum {
public:
    SpaceTimeSpectrum(GridSpec grid, TimeLattice time)
        : grid_(grid), time_(time), coeffs_(grid.points() * time.count) {}

    const GridSpec& grid() const noexcept { return grid_; }
    const TimeLattice& time() const noexcept { return time_; }
    std::size_t rows() const noexcept { return grid_.points(); }
    std::size_t cols() const noexcept { return time_.count; }

    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    Complex& operator()(std::size_t k, std::size_t j) noexcept { return coeffs_[k * time_.count + j]; }
    Complex operator()(std::size_t k, std::size_t j) const noexcept { return coeffs_[k * time_.count + j]; }

    double xi(std::size_t k) const noexcept { return grid_.xi(k); }
    double tau(std::size_t j) const noexcept { return time_.tau(j); }
    double cell() const noexcept { return grid_.frequency_step() * time_.frequency_step(); }

    bool same_lattice(const SpaceTimeSpectrum& other) const noexcept {
        return grid_ == other.grid_ && time_ == other.time_;
    }

private:
    GridSpec grid_;
    TimeLattice time_;
    std::vector<Complex> coeffs_;
};

struct SpaceTimeTransform {
    /// Multiply by η(4(t - t_c)/T_w) over the window before transforming.
    bool taper = false;
    /// Padded length is the next power of two ≥ pad_factor·count; 1 means no padding.
    std::size_t pad_factor = 2;
};

inline std::size_t padded_count(std::size_t count, std::size_t pad_factor) {
    if (pad_factor <= 1) return count;
    std::size_t n = 1;
    while (n < pad_factor * count) n <<= 1;
    return n;
}

/// Window taper weights η(4(t_l - t_c)/T_w): 1 on the central half, 0 at both ends.
inline std::vector<double> window_taper(const TimeLattice& lattice) {
    std::vector<double> w(lattice.count, 1.0);
    if (lattice.count < 2) return w;
    const double t0 = lattice.time(0);
    const double t1 = lattice.time(lattice.count - 1);
    const double centre = 0.5 * (t0 + t1);
    const double width = t1 - t0;
    const CutoffEta cutoff;
    for (std::size_t l = 0; l < lattice.count; ++l) w[l] = cutoff(4.0 * (lattice.time(l) - centre) / width);
    return w;
}

inline SpaceTimeSpectrum to_spacetime_spectrum(const SpaceTimeSamples& samples, SpaceTimeTransform opts = {}) {
    const std::size_t m = samples.grid.points();
    const std::size_t n = samples.time.count;
    const std::size_t np = padded_count(n, opts.pad_factor);
    const TimeLattice padded{samples.time.step, samples.time.first, np};

    SpaceTimeSpectrum out(samples.grid, padded);
    auto data = out.coeffs();
    const std::vector<double> weights = opts.taper ? window_taper(samples.time) : std::vector<double>(n, 1.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < n; ++l) data[i * np + l] = samples(i, l) * weights[l];

    fft::transform_2d(data, m, np, fft::Direction::forward);

    const double scale = samples.grid.dx() * samples.time.step / (2.0 * pi);
    std::vector<Complex> time_phase(np);
    for (std::size_t j = 0; j < np; ++j) {
        // exp(-i t_0 τ_j) with t_0 = first·h; reduce j·first mod np first to keep the angle small.
        const auto jf = static_cast<std::int64_t>(j) * samples.time.first;
        const auto red = ((jf % static_cast<std::int64_t>(np)) + static_cast<std::int64_t>(np)) %
                         static_cast<std::int64_t>(np);
        const double angle = -2.0 * pi * static_cast<double>(red) / static_cast<double>(np);
        time_phase[j] = std::polar(scale, angle);
    }
    for (std::size_t k = 0; k < m; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < np; ++j) data[k * np + j] *= sign * time_phase[j];
    }
    return out;
}

/// Physical samples on the spectrum's full (padded) lattice.
inline SpaceTimeSamples to_spacetime_samples(const SpaceTimeSpectrum& spectrum) {
    const std::size_t m = spectrum.rows();
    const std::size_t np = spectrum.cols();
    const TimeLattice& lat = spectrum.time();
    SpaceTimeSamples out(spectrum.grid(), lat);
    auto& data = out.values;
    const double scale = spectrum.cell() / (2.0 * pi);
    for (std::size_t k = 0; k < m; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < np; ++j) {
            const auto jf = static_cast<std::int64_t>(j) * lat.first;
            const auto red = ((jf % static_cast<std::int64_t>(np)) + static_cast<std::int64_t>(np)) %
                             static_cast<std::int64_t>(np);
            const double angle = 2.0 * pi * static_cast<double>(red) / static_cast<double>(np);
            data[k * np + j] = spectrum(k, j) * std::polar(sign * scale, angle);
        }
    }
    fft::transform_2d(data, m, np, fft::Direction::backward);
    return out;
}

}  // namespace kawahara
