#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kawahara/norms.hpp"
#include "support.hpp"

using namespace kawahara;

namespace {

SpaceTimeSamples random_samples(const GridSpec& g, const TimeLattice& t, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    SpaceTimeSamples s(g, t);
    for (auto& v : s.values) v = {gauss(rng), gauss(rng)};
    return s;
}

// Naive loop oracle for L^px_x L^pt_t (x_outer) with explicit pow/max.
double naive_mixed(const SpaceTimeSamples& u, double px, double pt, bool x_outer) {
    const std::size_t m = u.grid.points(), n = u.time.count;
    const double dx = u.grid.dx(), h = u.time.step;
    auto lp = [](const std::vector<double>& v, double p, double w) {
        if (std::isinf(p)) {
            double mx = 0;
            for (double x : v) mx = std::max(mx, x);
            return mx;
        }
        double s = 0;
        for (double x : v) s += w * std::pow(x, p);
        return std::pow(s, 1.0 / p);
    };
    std::vector<double> outer;
    if (x_outer) {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> inner;
            for (std::size_t l = 0; l < n; ++l) inner.push_back(std::abs(u(i, l)));
            outer.push_back(lp(inner, pt, h));
        }
        return lp(outer, px, dx);
    }
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<double> inner;
        for (std::size_t i = 0; i < m; ++i) inner.push_back(std::abs(u(i, l)));
        outer.push_back(lp(inner, px, dx));
    }
    return lp(outer, pt, h);
}

}  // namespace

TEST(NormParams, DerivedExponents) {
    const NormParams np(-1.0, 0.1);
    EXPECT_DOUBLE_EQ(np.s1(), 0.5 + 2 * 0.1);
    EXPECT_DOUBLE_EQ(np.b_prime(), -0.5 + 0.2);
    EXPECT_DOUBLE_EQ(np.b(), 0.55);
    EXPECT_LT(np.b_prime(), 0.0);
    EXPECT_GT(np.b(), 0.0);
    EXPECT_NO_THROW(np.require_threshold({1.0, 0.0}));
    EXPECT_THROW(np.require_threshold({1.0, 5.0}), InvalidParameters);
    EXPECT_THROW(NormParams(0.0, 0.0), InvalidParameters);
    EXPECT_THROW(NormParams(0.0, 0.3), InvalidParameters);
}

TEST(Sobolev, Examples) {
    const GridSpec g(4 * pi, 64);
    EXPECT_EQ(sobolev_norm(SpectralField1D(g), 0.7), 0.0);
    std::mt19937_64 rng(20);
    const auto u = testing_support::random_complex_field(g, rng);
    EXPECT_NEAR(sobolev_norm(u, 0.0), l2_norm(u), 1e-14 * l2_norm(u));

    SpectralField1D one(g);
    one.at_mode(5) = 1.0;
    const double xi0 = 5 * g.frequency_step();
    const double expect = std::pow(1 + xi0 * xi0, 0.35) * std::sqrt(g.frequency_step());
    EXPECT_NEAR(sobolev_norm(one, 0.7), expect, 1e-14);
}

TEST(Xsb, ZeroAndPlancherel) {
    std::mt19937_64 rng(21);
    const GridSpec g(3.0, 16);
    const TimeLattice t{0.05, -8, 17};
    const DispersionParams p(1.0, 0.0);
    const auto s = random_samples(g, t, rng);
    const auto F = to_spacetime_spectrum(s, {.taper = false, .pad_factor = 2});
    EXPECT_EQ(xsb_norm(SpaceTimeSpectrum(g, F.time()), 0.3, 0.6, p), 0.0);
    const double l2 = mixed_norm(s, 2, 2, MixedOrder::x_outer);
    EXPECT_NEAR(xsb_norm(F, 0.0, 0.0, p), l2, 1e-12 * l2);
}

TEST(Xsb, MonotoneInIndicesAndHomogeneous) {
    std::mt19937_64 rng(22);
    const GridSpec g(3.0, 16);
    const TimeLattice t{0.05, -8, 17};
    const DispersionParams p(1.0, 0.5);
    const auto F = to_spacetime_spectrum(random_samples(g, t, rng), {.taper = true, .pad_factor = 2});
    double prev = 0.0;
    for (double s : {-1.0, -0.5, 0.0, 0.25, 1.0}) {
        const double v = xsb_norm(F, s, 0.3, p);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double b : {-0.5, 0.0, 0.3, 0.55, 1.0}) {
        const double v = xsb_norm(F, 0.2, b, p);
        EXPECT_GE(v, prev);
        prev = v;
    }
    auto G = F;
    for (auto& c : G.coeffs()) c *= Complex{0.0, -3.0};
    EXPECT_NEAR(xsb_norm(G, 0.2, 0.55, p), 3.0 * xsb_norm(F, 0.2, 0.55, p), 1e-12 * xsb_norm(G, 0.2, 0.55, p));
}

TEST(Modulation, NearestAliasOfSurface) {
    const DispersionParams p(1.0, 0.0);
    const double period = 10.0;
    EXPECT_NEAR(modulation(2.0, -32.0, period, p), 0.0, 1e-14);
    EXPECT_NEAR(modulation(2.0, -30.0, period, p), 2.0, 1e-14);
    EXPECT_NEAR(modulation(2.0, -36.0, period, p), -4.0, 1e-14);
    EXPECT_NEAR(modulation(2.0, 0.0, period, p), 2.0, 1e-12);
}

TEST(Resonance, Examples) {
    const DispersionParams p(1.0, 0.0);
    EXPECT_DOUBLE_EQ(resonance_gap(1.0, 1.0, p), 30.0);
    EXPECT_DOUBLE_EQ(phi(2.0, p) - 2 * phi(1.0, p), 30.0);
    EXPECT_EQ(resonance_gap(1.7, 0.0, p), 0.0);
    EXPECT_EQ(resonance_gap(1.7, -1.7, p), 0.0);
}

TEST(Resonance, IdentityOnRandomTuples) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n = 0; n < 1000; ++n) {
        double alpha = u(rng);
        if (alpha == 0.0) alpha = 1.0;
        const DispersionParams p(alpha, u(rng));
        const double x1 = u(rng), x2 = u(rng);
        const double direct = std::abs(phi(x1 + x2, p) - phi(x1, p) - phi(x2, p));
        EXPECT_LE(std::abs(resonance_gap(x1, x2, p) - direct), 1e-9 * (1 + std::abs(phi(x1 + x2, p))));
    }
}

TEST(Mixed, MatchesNaiveLoops) {
    std::mt19937_64 rng(24);
    const GridSpec g(2.0, 16);
    const TimeLattice t{0.1, -3, 16};
    const auto s = random_samples(g, t, rng);
    for (double px : {2.0, 4.0, 12.0, infinity})
        for (double pt : {2.0, 4.0, 12.0, infinity})
            for (bool xo : {true, false}) {
                const double fast = mixed_norm(s, px, pt, xo ? MixedOrder::x_outer : MixedOrder::t_outer);
                const double slow = naive_mixed(s, px, pt, xo);
                EXPECT_NEAR(fast, slow, 1e-12 * slow) << px << " " << pt << " " << xo;
            }
}

TEST(Mixed, ConstantField) {
    const GridSpec g(2.0, 16);
    const TimeLattice t{0.25, 0, 8};
    SpaceTimeSamples s(g, t);
    for (auto& v : s.values) v = 1.5;
    const double Q = g.length() * t.period();
    for (double p : {2.0, 4.0, 12.0})
        EXPECT_NEAR(mixed_norm(s, p, p, MixedOrder::x_outer), 1.5 * std::pow(Q, 1.0 / p), 1e-13);
    EXPECT_NEAR(mixed_norm(s, infinity, infinity, MixedOrder::t_outer), 1.5, 0.0);
}

TEST(Mixed, SingleTimeSampleWithSupInner) {
    std::mt19937_64 rng(25);
    const GridSpec g(2.0, 32);
    const TimeLattice t{0.1, 0, 1};
    const auto s = random_samples(g, t, rng);
    double direct = 0.0;
    for (std::size_t i = 0; i < 32; ++i) direct += g.dx() * std::pow(std::abs(s(i, 0)), 4);
    EXPECT_NEAR(mixed_norm(s, 4, infinity, MixedOrder::x_outer), std::pow(direct, 0.25), 1e-13);
}

TEST(Mixed, HolderNesting) {
    std::mt19937_64 rng(26);
    const GridSpec g(2.0, 16);
    const TimeLattice t{0.1, 0, 12};
    const double Q = g.length() * t.period();
    for (int n = 0; n < 20; ++n) {
        const auto s = random_samples(g, t, rng);
        EXPECT_LE(mixed_norm(s, 2, 2, MixedOrder::x_outer),
                  std::pow(Q, 0.25) * mixed_norm(s, 4, 4, MixedOrder::x_outer) * (1 + 1e-14));
    }
}

TEST(Mixed, UnsupportedExponent) {
    const GridSpec g(2.0, 8);
    SpaceTimeSamples s(g, TimeLattice{0.1, 0, 4});
    EXPECT_THROW(mixed_norm(s, 3.0, 2.0, MixedOrder::x_outer), InvalidInput);
    EXPECT_THROW(mixed_norm(s, 2.0, 1.0, MixedOrder::t_outer), InvalidInput);
}

TEST(Mixed, Homogeneous) {
    std::mt19937_64 rng(27);
    const GridSpec g(2.0, 16);
    const auto s = random_samples(g, TimeLattice{0.1, 0, 8}, rng);
    auto c = s;
    for (auto& v : c.values) v *= -2.5;
    for (double p : {2.0, 4.0, 12.0, infinity}) {
        const double a = mixed_norm(s, p, p, MixedOrder::x_outer);
        EXPECT_NEAR(mixed_norm(c, p, p, MixedOrder::x_outer), 2.5 * a, 1e-12 * 2.5 * a);
    }
}

TEST(Ratio, IdentityNormsGiveUnitRatio) {
    const auto report = estimate_ratio(
        1, {64, 128}, [](std::size_t, int level) { return 1.0 + level; },
        [](double x) { return x; }, [](double x) { return x; });
    EXPECT_EQ(report.max_ratio[0], 1.0);
    EXPECT_EQ(report.max_ratio[1], 1.0);
    EXPECT_EQ(report.overall_max(), 1.0);
    EXPECT_EQ(report.slope, 0.0);
    EXPECT_EQ(report.entries.size(), 2u);
}

TEST(Ratio, ZeroRhsSkipped) {
    const auto report = estimate_ratio(
        3, {8, 16}, [](std::size_t id, int) { return static_cast<double>(id); },
        [](double x) { return 2 * x; }, [](double x) { return x; }, 2);
    EXPECT_EQ(report.skipped, 2u);
    EXPECT_EQ(report.entries.size(), 4u);
    EXPECT_EQ(report.max_ratio[0], 2.0);
}

TEST(Ratio, CsvHeader) {
    const auto report = estimate_ratio(
        1, {8, 16}, [](std::size_t, int) { return 1.0; }, [](double) { return 0.5; }, [](double) { return 1.0; });
    std::ostringstream out;
    report.write_csv(out);
    EXPECT_EQ(out.str(),
              "sample_id,lhs,rhs,ratio,resolution\n"
              "0,5.000000000000e-01,1.000000000000e+00,5.000000000000e-01,8\n"
              "0,5.000000000000e-01,1.000000000000e+00,5.000000000000e-01,16\n");
}
