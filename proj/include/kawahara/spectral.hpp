#pragma once

// Dispersion relation, smooth cutoff, Fourier projections and the exact
// linear propagator on the periodic grid [-L, L).
//
// Fourier convention (discrete analogue of the unitary 1/sqrt(2π) pair):
//   c_k   = dx/sqrt(2π) · Σ_j u(x_j) exp(-i x_j ξ_k),
//   u(x_j) = dξ/sqrt(2π) · Σ_k c_k exp(+i x_j ξ_k),
// with x_j = -L + j·dx, ξ_k = k·π/L, dx·dξ·M = 2π. Plancherel reads
//   Σ_j dx |u_j|² = Σ_k dξ |c_k|²
// exactly. Coefficients are stored in FFT order (index i ↔ k = i for
// i < M/2, k = i - M for i ≥ M/2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kawahara/errors.hpp"
#include "kawahara/fft.hpp"

namespace kawahara {

using Complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Japanese bracket ⟨x⟩ = (1 + x²)^{1/2}.
inline double bracket(double x) { return std::hypot(1.0, x); }

inline double threshold_a(double alpha, double beta) {
    if (alpha == 0.0) throw InvalidParameters("alpha must be nonzero");
    return std::max(1.0, std::sqrt(2.0 * std::abs(3.0 * beta / (5.0 * alpha))));
}

/// Coefficients of u_t + α∂⁵u + β∂³u + ∂(u²) = 0 and the derived low/high
/// frequency threshold a.
class DispersionParams {
public:
    DispersionParams(double alpha, double beta)
        : alpha_(alpha), beta_(beta), a_(threshold_a(alpha, beta)) {}

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double a() const noexcept { return a_; }

private:
    double alpha_;
    double beta_;
    double a_;
};

inline double threshold_a(const DispersionParams& params) {
    return threshold_a(params.alpha(), params.beta());
}

/// φ(ξ) = αξ⁵ − βξ³. Odd powers by repeated multiplication so that
/// phi(-ξ) == -phi(ξ) holds bit for bit.
inline double phi(double xi, const DispersionParams& params) {
    const double xi3 = xi * xi * xi;
    const double xi5 = xi3 * xi * xi;
    return params.alpha() * xi5 - params.beta() * xi3;
}

inline double phi_prime(double xi, const DispersionParams& params) {
    const double xi2 = xi * xi;
    return 5.0 * params.alpha() * xi2 * xi2 - 3.0 * params.beta() * xi2;
}

class GridSpec {
public:
    GridSpec(double half_length, std::size_t points) : half_length_(half_length), points_(points) {
        if (!(half_length > 0.0) || !std::isfinite(half_length))
            throw InvalidParameters("half_length L must be positive");
        if (points < 8 || (points & (points - 1)) != 0)
            throw InvalidParameters("points M must be a power of two >= 8");
    }

    double half_length() const noexcept { return half_length_; }
    std::size_t points() const noexcept { return points_; }
    double dx() const noexcept { return 2.0 * half_length_ / static_cast<double>(points_); }
    double frequency_step() const noexcept { return pi / half_length_; }
    double length() const noexcept { return 2.0 * half_length_; }

    /// Signed mode number for FFT-order index i.
    std::int64_t mode(std::size_t index) const noexcept {
        const auto i = static_cast<std::int64_t>(index);
        const auto m = static_cast<std::int64_t>(points_);
        return i < m / 2 ? i : i - m;
    }

    std::size_t index(std::int64_t k) const noexcept {
        const auto m = static_cast<std::int64_t>(points_);
        return static_cast<std::size_t>(((k % m) + m) % m);
    }

    double xi(std::size_t index) const noexcept {
        return static_cast<double>(mode(index)) * frequency_step();
    }

    double x(std::size_t j) const noexcept {
        return -half_length_ + static_cast<double>(j) * dx();
    }

    /// |ξ| of the unpaired mode k = -M/2; the largest frequency magnitude on the lattice.
    double max_frequency() const noexcept {
        return static_cast<double>(points_ / 2) * frequency_step();
    }

    std::size_t nyquist_index() const noexcept { return points_ / 2; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double half_length_;
    std::size_t points_;
};

class SpectralField1D {
public:
    explicit SpectralField1D(GridSpec grid) : grid_(grid), coeffs_(grid.points()) {}

    SpectralField1D(GridSpec grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != grid_.points())
            throw InvalidInput("coefficient count " + std::to_string(coeffs_.size()) +
                               " does not match grid size " + std::to_string(grid_.points()));
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }
    Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }

    /// Coefficient at signed mode k.
    Complex at_mode(std::int64_t k) const noexcept { return coeffs_[grid_.index(k)]; }
    Complex& at_mode(std::int64_t k) noexcept { return coeffs_[grid_.index(k)]; }

    /// coeffs(-k) == conj(coeffs(k)) for every paired k and the Nyquist mode vanishes.
    bool is_conjugate_symmetric() const noexcept {
        const std::size_t m = coeffs_.size();
        if (coeffs_[grid_.nyquist_index()] != Complex{}) return false;
        if (coeffs_[0].imag() != 0.0) return false;
        for (std::size_t i = 1; i < m / 2; ++i)
            if (coeffs_[m - i] != std::conj(coeffs_[i])) return false;
        return true;
    }

    /// Project onto real-valued fields: average paired modes, drop the Nyquist mode.
    SpectralField1D& enforce_real() noexcept {
        const std::size_t m = coeffs_.size();
        coeffs_[0] = Complex{coeffs_[0].real(), 0.0};
        coeffs_[grid_.nyquist_index()] = Complex{};
        for (std::size_t i = 1; i < m / 2; ++i) {
            const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[m - i]));
            coeffs_[i] = avg;
            coeffs_[m - i] = std::conj(avg);
        }
        return *this;
    }

    bool all_finite() const noexcept {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
    }

    SpectralField1D& operator+=(const SpectralField1D& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
        return *this;
    }

    SpectralField1D& operator-=(const SpectralField1D& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
        return *this;
    }

    SpectralField1D& operator*=(Complex factor) noexcept {
        for (auto& c : coeffs_) c *= factor;
        return *this;
    }

    friend SpectralField1D operator+(SpectralField1D lhs, const SpectralField1D& rhs) { return lhs += rhs; }
    friend SpectralField1D operator-(SpectralField1D lhs, const SpectralField1D& rhs) { return lhs -= rhs; }
    friend SpectralField1D operator*(Complex factor, SpectralField1D field) { return field *= factor; }
    friend SpectralField1D operator*(SpectralField1D field, Complex factor) { return field *= factor; }

    friend bool operator==(const SpectralField1D&, const SpectralField1D&) = default;

private:
    void require_same_grid(const SpectralField1D& other) const {
        if (!(grid_ == other.grid_)) throw InvalidInput("fields live on different grids");
    }

    GridSpec grid_;
    std::vector<Complex> coeffs_;
};

/// Smooth even cutoff: 1 on |x| ≤ 1, 0 on |x| ≥ 2, a C^∞ monotone
/// transition in between.
class CutoffEta {
public:
    double operator()(double x) const noexcept {
        const double r = std::abs(x) - 1.0;
        if (r <= 0.0) return 1.0;
        if (r >= 1.0) return 0.0;
        const double rise = std::exp(-1.0 / r);
        const double fall = std::exp(-1.0 / (1.0 - r));
        return fall / (rise + fall);
    }
};

inline double eta(double x, const CutoffEta& cutoff = {}) { return cutoff(x); }

/// Exact free flow U(t): multiply each coefficient by exp(-i t φ(ξ_k)).
inline SpectralField1D propagate(const SpectralField1D& u, double t, const DispersionParams& params) {
    if (t == 0.0) return u;
    SpectralField1D out = u;
    const GridSpec& grid = u.grid();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double theta = t * phi(grid.xi(i), params);
        out[i] *= Complex{std::cos(theta), -std::sin(theta)};
    }
    return out;
}

/// P_N: keep |ξ_k| ≤ N. Boundary modes go to the low piece.
inline SpectralField1D project_low(const SpectralField1D& u, double cutoff) {
    if (cutoff < 0.0) throw InvalidParameters("cutoff N must be non-negative");
    SpectralField1D out = u;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (std::abs(u.grid().xi(i)) > cutoff) out[i] = Complex{};
    return out;
}

/// P^N: keep |ξ_k| > N.
inline SpectralField1D project_high(const SpectralField1D& u, double cutoff) {
    if (cutoff < 0.0) throw InvalidParameters("cutoff N must be non-negative");
    SpectralField1D out = u;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (std::abs(u.grid().xi(i)) <= cutoff) out[i] = Complex{};
    return out;
}

/// Samples u(x_j), j = 0..M-1.
inline std::vector<Complex> to_physical(const SpectralField1D& u) {
    const GridSpec& grid = u.grid();
    const std::size_t m = grid.points();
    std::vector<Complex> samples(u.coeffs().begin(), u.coeffs().end());
    // exp(i x_j ξ_k) = (-1)^k exp(2πi jk/M) because x_0 = -L.
    for (std::size_t i = 1; i < m; i += 2) samples[i] = -samples[i];
    fft::transform(samples, fft::Direction::backward);
    const double scale = grid.frequency_step() / std::sqrt(2.0 * pi);
    for (auto& v : samples) v *= scale;
    return samples;
}

inline std::vector<double> to_physical_real(const SpectralField1D& u) {
    const auto samples = to_physical(u);
    std::vector<double> out(samples.size());
    std::transform(samples.begin(), samples.end(), out.begin(), [](const Complex& c) { return c.real(); });
    return out;
}

inline SpectralField1D to_spectral(std::span<const Complex> samples, const GridSpec& grid) {
    if (samples.size() != grid.points())
        throw InvalidInput("sample count " + std::to_string(samples.size()) + " does not match grid size " +
                           std::to_string(grid.points()));
    std::vector<Complex> coeffs(samples.begin(), samples.end());
    fft::transform(coeffs, fft::Direction::forward);
    const double scale = grid.dx() / std::sqrt(2.0 * pi);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= (i % 2 == 0 ? scale : -scale);
    return SpectralField1D(grid, std::move(coeffs));
}

inline SpectralField1D to_spectral(std::span<const double> samples, const GridSpec& grid) {
    std::vector<Complex> values(samples.begin(), samples.end());
    return to_spectral(std::span<const Complex>(values), grid);
}

/// Discrete L² norm of the coefficients, (Σ dξ |c_k|²)^{1/2}.
inline double l2_norm(const SpectralField1D& u) {
    double sum = 0.0;
    for (const auto& c : u.coeffs()) sum += std::norm(c);
    return std::sqrt(sum * u.grid().frequency_step());
}

/// Coefficient at k = 0 (the mean mode).
inline Complex mean_mode(const SpectralField1D& u) { return u[0]; }

}  // namespace kawahara
