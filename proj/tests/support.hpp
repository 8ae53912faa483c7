#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kawahara/spectral.hpp"

namespace testing_support {

using kawahara::Complex;

/// Random real field with Gaussian-decaying coefficients.
inline kawahara::SpectralField1D random_real_field(const kawahara::GridSpec& grid, std::mt19937_64& rng,
                                                   double width = 8.0) {
    std::normal_distribution<double> gauss;
    kawahara::SpectralField1D u(grid);
    for (std::size_t i = 0; i < grid.points(); ++i) {
        const double xi = grid.xi(i);
        u[i] = Complex{gauss(rng), gauss(rng)} * std::exp(-0.5 * xi * xi / (width * width));
    }
    u.enforce_real();
    return u;
}

inline kawahara::SpectralField1D random_complex_field(const kawahara::GridSpec& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    kawahara::SpectralField1D u(grid);
    for (auto& c : u.coeffs()) c = Complex{gauss(rng), gauss(rng)};
    return u;
}

inline double max_abs_diff(const kawahara::SpectralField1D& a, const kawahara::SpectralField1D& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const kawahara::SpectralField1D& a) {
    double m = 0.0;
    for (const auto& c : a.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace testing_support
