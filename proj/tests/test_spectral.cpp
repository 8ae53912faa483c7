#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kawahara/spectral.hpp"
#include "support.hpp"

using namespace kawahara;
using testing_support::max_abs;
using testing_support::max_abs_diff;

namespace {

// Direct O(M²) evaluation of the forward transform.
std::vector<Complex> naive_forward(const std::vector<Complex>& samples, const GridSpec& grid) {
    std::vector<Complex> out(grid.points());
    for (std::size_t k = 0; k < grid.points(); ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < grid.points(); ++j)
            acc += samples[j] * std::polar(1.0, -grid.x(j) * grid.xi(k));
        out[k] = acc * grid.dx() / std::sqrt(2.0 * pi);
    }
    return out;
}

}  // namespace

TEST(Dispersion, PhiExamples) {
    EXPECT_EQ(phi(0.0, {1.0, 0.0}), 0.0);
    EXPECT_EQ(phi(1.0, {1.0, 1.0}), 0.0);
    EXPECT_EQ(phi(2.0, {1.0, 0.0}), 32.0);
}

TEST(Dispersion, PhiIsOdd) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int n = 0; n < 1000; ++n) {
        const DispersionParams p(dist(rng) + 20.0, dist(rng));
        const double xi = dist(rng);
        EXPECT_EQ(phi(-xi, p), -phi(xi, p));
    }
}

TEST(Dispersion, PhiPrimeMatchesDifferenceQuotient) {
    const DispersionParams p(1.3, -0.7);
    for (double xi : {-3.0, -0.4, 0.0, 0.9, 2.5}) {
        const double h = 1e-5;
        const double fd = (phi(xi + h, p) - phi(xi - h, p)) / (2 * h);
        EXPECT_NEAR(phi_prime(xi, p), fd, 1e-6 * (1 + std::abs(fd)));
    }
}

TEST(Dispersion, ThresholdExamples) {
    EXPECT_EQ(threshold_a(DispersionParams(1.0, 0.0)), 1.0);
    EXPECT_NEAR(threshold_a(DispersionParams(1.0, 5.0 / 6.0)), 1.0, 1e-15);
    EXPECT_NEAR(threshold_a(DispersionParams(1.0, 5.0)), std::sqrt(6.0), 1e-15);
    EXPECT_NEAR(DispersionParams(-2.0, 10.0).a(), std::sqrt(6.0), 1e-15);
}

TEST(Dispersion, ZeroAlphaRejected) {
    EXPECT_THROW(DispersionParams(0.0, 1.0), InvalidParameters);
    try {
        DispersionParams(0.0, 1.0);
    } catch (const InvalidParameters& e) {
        EXPECT_STREQ(e.what(), "alpha must be nonzero");
    }
}

TEST(Grid, Geometry) {
    const GridSpec g(64 * pi, 4096);
    EXPECT_DOUBLE_EQ(g.dx() * 4096, 2 * 64 * pi);
    EXPECT_EQ(g.mode(0), 0);
    EXPECT_EQ(g.mode(2047), 2047);
    EXPECT_EQ(g.mode(2048), -2048);
    EXPECT_EQ(g.index(-1), 4095u);
    for (std::size_t i = 1; i < 2048; ++i) EXPECT_EQ(g.xi(4096 - i), -g.xi(i));
    EXPECT_THROW(GridSpec(1.0, 12), InvalidParameters);
    EXPECT_THROW(GridSpec(1.0, 4), InvalidParameters);
    EXPECT_THROW(GridSpec(-1.0, 16), InvalidParameters);
}

TEST(Eta, ValuesAndShape) {
    const CutoffEta cutoff;
    EXPECT_EQ(eta(0.5), 1.0);
    EXPECT_EQ(eta(1.0), 1.0);
    EXPECT_EQ(eta(3.0), 0.0);
    EXPECT_EQ(eta(2.0), 0.0);
    EXPECT_GT(eta(1.5), 0.0);
    EXPECT_LT(eta(1.5), 1.0);
    EXPECT_NEAR(eta(1.5), 0.5, 1e-15);
    double prev = 1.0;
    for (int n = 0; n <= 1000; ++n) {
        const double x = 1.0 + n / 1000.0;
        const double v = cutoff(x);
        EXPECT_EQ(v, cutoff(-x));
        EXPECT_LE(v, prev);
        EXPECT_GE(v, 0.0);
        prev = v;
    }
}

TEST(Eta, FlatAtBothJoins) {
    // Every derivative vanishes at |x| = 1 and 2: the gap shrinks faster than any power.
    for (double r : {1e-2, 5e-3}) {
        EXPECT_LT(1.0 - eta(1.0 + r), std::pow(r, 6));
        EXPECT_LT(eta(2.0 - r), std::pow(r, 6));
    }
}

TEST(Propagate, IdentityAtZero) {
    std::mt19937_64 rng(1);
    const GridSpec g(8 * pi, 64);
    const auto u = testing_support::random_complex_field(g, rng);
    EXPECT_EQ(propagate(u, 0.0, {1.0, 0.3}), u);
}

TEST(Propagate, SingleMode) {
    const GridSpec g(4 * pi, 32);
    const DispersionParams p(1.0, 0.5);
    SpectralField1D u(g);
    u.at_mode(3) = 1.0;
    const double t = 0.37;
    const auto v = propagate(u, t, p);
    for (std::size_t i = 0; i < g.points(); ++i) {
        if (g.mode(i) == 3) {
            const Complex expect = std::polar(1.0, -t * phi(g.xi(i), p));
            EXPECT_NEAR(std::abs(v[i] - expect), 0.0, 1e-15);
        } else {
            EXPECT_EQ(v[i], Complex{});
        }
    }
}

TEST(Propagate, UnitaryAndSemigroup) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> times(-1.0, 1.0);
    const GridSpec g(64 * pi, 1024);
    const DispersionParams p(1.0, -0.4);
    // Smooth data: a phase of size t·φ(ξ_max) ~ 3e4 carries an unavoidable
    // rounding error of ~1e-12 radians, so the top modes must be small.
    for (int n = 0; n < 100; ++n) {
        const auto u = testing_support::random_real_field(g, rng, 2.0);
        const double s = times(rng);
        const double t = times(rng);
        const auto st = propagate(u, s + t, p);
        const auto composed = propagate(propagate(u, s, p), t, p);
        EXPECT_LE(max_abs_diff(st, composed), 1e-12 * max_abs(u));
        EXPECT_NEAR(l2_norm(st), l2_norm(u), 1e-12 * l2_norm(u));
    }
}

TEST(Propagate, DocumentedSemigroupExample) {
    std::mt19937_64 rng(3);
    const GridSpec g(64 * pi, 1024);
    const DispersionParams p(1.0, 0.0);
    const auto u = testing_support::random_real_field(g, rng, 3.0);
    EXPECT_LE(max_abs_diff(propagate(propagate(u, 0.1, p), 0.2, p), propagate(u, 0.3, p)), 1e-12);
}

TEST(Projection, Algebra) {
    std::mt19937_64 rng(4);
    const GridSpec g(8 * pi, 128);
    const DispersionParams p(1.0, 1.0);
    const auto u = testing_support::random_complex_field(g, rng);
    for (double N : {0.0, 0.5, 1.0, 2.25, 7.9, 100.0}) {
        const auto lo = project_low(u, N);
        const auto hi = project_high(u, N);
        EXPECT_EQ(lo + hi, u);
        EXPECT_EQ(project_low(lo, N), lo);
        EXPECT_EQ(project_high(hi, N), hi);
        EXPECT_EQ(propagate(lo, 0.3, p), project_low(propagate(u, 0.3, p), N));
        EXPECT_EQ(propagate(hi, 0.3, p), project_high(propagate(u, 0.3, p), N));
    }
    EXPECT_THROW(project_low(u, -1.0), InvalidParameters);
    EXPECT_THROW(project_high(u, -1.0), InvalidParameters);
}

TEST(Projection, BoundaryModeGoesLow) {
    const GridSpec g(pi, 16);  // ξ_k = k
    SpectralField1D u(g);
    u.at_mode(3) = 1.0;
    EXPECT_EQ(project_low(u, 3.0), u);
    EXPECT_EQ(project_high(u, 3.0), SpectralField1D(g));
    EXPECT_EQ(project_low(u, 2.5), SpectralField1D(g));
}

TEST(Reality, PreservedByFlowAndProjections) {
    std::mt19937_64 rng(5);
    const GridSpec g(16 * pi, 256);
    const DispersionParams p(-0.8, 2.0);
    for (int n = 0; n < 20; ++n) {
        const auto u = testing_support::random_real_field(g, rng);
        ASSERT_TRUE(u.is_conjugate_symmetric());
        EXPECT_TRUE(propagate(u, 0.731 * n, p).is_conjugate_symmetric());
        EXPECT_TRUE(project_low(u, 2.0).is_conjugate_symmetric());
        EXPECT_TRUE(project_high(u, 2.0).is_conjugate_symmetric());
    }
}

TEST(Transform, ConstantSamples) {
    const GridSpec g(2 * pi, 32);
    const std::vector<double> c(32, 2.5);
    const auto u = to_spectral(std::span<const double>(c), g);
    EXPECT_NEAR(u[0].real(), 2.5 * g.length() / std::sqrt(2 * pi), 1e-12);
    for (std::size_t i = 1; i < 32; ++i) EXPECT_LT(std::abs(u[i]), 1e-13);
}

TEST(Transform, MatchesDirectSum) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss;
    const GridSpec g(3.0, 16);
    std::vector<Complex> samples(16);
    for (auto& v : samples) v = {gauss(rng), gauss(rng)};
    const auto fast = to_spectral(samples, g);
    const auto slow = naive_forward(samples, g);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(std::abs(fast[k] - slow[k]), 0.0, 1e-13);
}

TEST(Transform, Plancherel) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss;
    for (std::size_t m : {8u, 16u, 64u}) {
        const GridSpec g(5.0, m);
        std::vector<Complex> samples(m);
        double phys = 0.0;
        for (auto& v : samples) {
            v = {gauss(rng), gauss(rng)};
            phys += g.dx() * std::norm(v);
        }
        // Oracle: the direct sum, not the FFT path.
        const auto coeffs = naive_forward(samples, g);
        double spec = 0.0;
        for (const auto& c : coeffs) spec += g.frequency_step() * std::norm(c);
        EXPECT_NEAR(spec, phys, 1e-12 * phys);
        EXPECT_NEAR(l2_norm(to_spectral(samples, g)), std::sqrt(phys), 1e-12 * std::sqrt(phys));
    }
}

TEST(Transform, RoundTrip) {
    std::mt19937_64 rng(9);
    const GridSpec g(64 * pi, 1024);
    for (int n = 0; n < 10; ++n) {
        const auto u = testing_support::random_complex_field(g, rng);
        const auto back = to_spectral(to_physical(u), g);
        EXPECT_LE(max_abs_diff(back, u), 1e-12 * max_abs(u));
    }
}

TEST(Transform, LengthMismatch) {
    const GridSpec g(1.0, 16);
    const std::vector<Complex> wrong(15);
    EXPECT_THROW(to_spectral(wrong, g), InvalidInput);
    EXPECT_THROW(SpectralField1D(g, std::vector<Complex>(8)), InvalidInput);
}

TEST(Field, EnforceRealIsIdempotentProjection) {
    std::mt19937_64 rng(10);
    const GridSpec g(pi, 32);
    auto u = testing_support::random_complex_field(g, rng);
    u.enforce_real();
    EXPECT_TRUE(u.is_conjugate_symmetric());
    const auto v = u;
    u.enforce_real();
    EXPECT_EQ(u, v);
    for (const auto& s : to_physical(u)) EXPECT_LT(std::abs(s.imag()), 1e-13);
}
