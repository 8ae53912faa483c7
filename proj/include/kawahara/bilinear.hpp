#pragma once

// Bilinear estimates for ∂(u₁u₂) in X_{s,b} lattices: frequency regions,
// duality kernels, the lattice left-hand side, two-resolution estimate
// checks, and the resonant-rectangle family that breaks the estimate for
// s ≤ -1/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kawahara/csv.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/fft.hpp"
#include "kawahara/norms.hpp"
#include "kawahara/parallel.hpp"
#include "kawahara/spacetime.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

enum class Region { omega1 = 1, omega2, omega3, omega4, omega5, omega6 };

inline std::string to_string(Region r) { return "Omega" + std::to_string(static_cast<int>(r)); }

/// First matching region for |ξ₁| ≥ |ξ₂|, ξ = ξ₁ + ξ₂.
inline Region region_classify(double xi1, double xi2, double a) {
    const double m1 = std::abs(xi1);
    const double m2 = std::abs(xi2);
    if (m1 < m2) throw InvalidInput("region classification needs |xi1| >= |xi2|");
    if (m1 <= 4.0 * a) return Region::omega1;
    if (m1 > 4.0 * m2) return m2 <= a ? Region::omega2 : Region::omega3;
    if (xi1 * xi2 >= 0.0) return Region::omega4;
    return 4.0 * std::abs(xi1 + xi2) >= m2 ? Region::omega5 : Region::omega6;
}

enum class Kernel { K1, K2 };

/// Duality weight |ξ|⟨ξ⟩^{s_out} ⟨σ⟩^{b'} / Π⟨ξ_j⟩^{s_in}⟨σ_j⟩^{b}; K1 uses
/// s_out = s_in = s, K2 uses s_out = s₁ and s_in = s₂.
inline double kernel_K(Kernel which, double xi1, double tau1, double xi, double tau, const NormParams& np,
                       const DispersionParams& params) {
    const double xi2 = xi - xi1;
    const double tau2 = tau - tau1;
    const double sigma = tau + phi(xi, params);
    const double sigma1 = tau1 + phi(xi1, params);
    const double sigma2 = tau2 + phi(xi2, params);
    const double s_out = which == Kernel::K1 ? np.s() : np.s1();
    const double s_in = which == Kernel::K1 ? np.s() : np.s2();
    const double num = std::abs(xi) * std::pow(bracket(xi), s_out);
    const double den = std::pow(bracket(sigma), -np.b_prime()) * std::pow(bracket(sigma1), np.b()) *
                       std::pow(bracket(sigma2), np.b()) * std::pow(bracket(xi1), s_in) * std::pow(bracket(xi2), s_in);
    return num / den;
}

/// Spectrum of the lattice product uv (exact cyclic convolution on the lattice).
inline SpaceTimeSpectrum product_spectrum(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v) {
    if (!u.same_lattice(v)) throw InvalidInput("bilinear operands live on different lattices");
    SpaceTimeSamples a = to_spacetime_samples(u);
    const SpaceTimeSamples b = to_spacetime_samples(v);
    for (std::size_t n = 0; n < a.values.size(); ++n) a.values[n] *= b.values[n];
    return to_spacetime_spectrum(a, {.taper = false, .pad_factor = 1});
}

/// ‖∂(uv)‖_{X_{s_out, b_out}} on the common lattice of u and v.
inline double bilinear_lhs(const SpaceTimeSpectrum& u, const SpaceTimeSpectrum& v, double s_out, double b_out,
                           const DispersionParams& params) {
    SpaceTimeSpectrum w = product_spectrum(u, v);
    for (std::size_t k = 0; k < w.rows(); ++k) {
        const double xi = w.xi(k);
        for (std::size_t j = 0; j < w.cols(); ++j) w(k, j) *= Complex{0.0, xi};
    }
    return xsb_norm(w, s_out, b_out, params);
}

enum class BilinearTheorem { full_range, smoothing };

inline void require_hypotheses(BilinearTheorem theorem, const NormParams& np) {
    const double tol = 1e-12;
    if (theorem == BilinearTheorem::full_range && np.s() < -1.75 + 4.0 * np.epsilon() - tol)
        throw InvalidParameters("s must be at least -7/4 + 4 epsilon");
    if (theorem == BilinearTheorem::smoothing && np.s2() < -0.5 + np.epsilon() - tol)
        throw InvalidParameters("s2 must be at least -1/2 + epsilon");
}

/// Ratio ‖∂(u₁u₂)‖ / (‖u₁‖‖u₂‖) for a family of operand pairs at two levels.
/// make(id, level) returns std::pair<SpaceTimeSpectrum, SpaceTimeSpectrum>.
template <class Make>
RatioReport verify_estimate(BilinearTheorem theorem, std::size_t count, std::array<std::size_t, 2> resolutions,
                            Make&& make, const NormParams& np, const DispersionParams& params, unsigned threads = 1) {
    require_hypotheses(theorem, np);
    const bool full = theorem == BilinearTheorem::full_range;
    const double s_out = full ? np.s() : np.s1();
    const double s_in = full ? np.s() : np.s2();
    return estimate_ratio(
        count, resolutions, std::forward<Make>(make),
        [&](const auto& pair) { return bilinear_lhs(pair.first, pair.second, s_out, np.b_prime(), params); },
        [&](const auto& pair) {
            return xsb_norm(pair.first, s_in, np.b(), params) * xsb_norm(pair.second, s_in, np.b(), params);
        },
        threads);
}

// ---------------------------------------------------------------------------
// Resonant rectangles.
//
// A hugs the free-wave surface τ = -φ(ξ) along its tangent at ξ = N, B sits
// at ξ ~ N^{-3/2} on the parallel line through the origin, so A + B lies
// back on A's tangent band. Points are handled in sheared coordinates
// (ξ, d) with τ = line(ξ) + d, where convolution is still convolution.

struct ShearedRect {
    double xi_center = 0.0;
    double xi_half = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double band_half = 0.5;

    double line(double xi) const { return intercept + slope * xi; }
    double xi_lo() const { return xi_center - xi_half; }
    double xi_hi() const { return xi_center + xi_half; }
    bool contains(double xi, double tau) const {
        // Relative slack keeps lattice points that sit on an edge up to rounding.
        constexpr double slack = 1.0 + 1e-9;
        return std::abs(xi - xi_center) <= xi_half * slack && std::abs(tau - line(xi)) <= band_half * slack;
    }
};

struct CounterexamplePair {
    double N = 0.0;
    double delta = 0.0;  // N^{-3/2}
    int density = 0;
    ShearedRect A, B, R;
    DispersionParams params{1.0, 0.0};

    double xi_step() const { return delta / density; }
    double d_step() const { return A.band_half / density; }
    std::size_t xi_count() const { return static_cast<std::size_t>(2 * density); }
    std::size_t d_count() const { return static_cast<std::size_t>(2 * density); }

    /// Cell-centred lattices covering A and B.
    double xi_a(std::size_t i) const { return A.xi_lo() + (static_cast<double>(i) + 0.5) * xi_step(); }
    double xi_b(std::size_t i) const { return B.xi_lo() + (static_cast<double>(i) + 0.5) * xi_step(); }
    double d_at(std::size_t j) const { return -A.band_half + (static_cast<double>(j) + 0.5) * d_step(); }

    /// Distance of (ξ, line_A(ξ) + d) from the surface, φ expanded about N to avoid cancellation.
    double sigma_on_a_line(double xi, double d) const {
        const double h = xi - N;
        const double a = params.alpha();
        const double b = params.beta();
        const double rem = a * h * h * (10.0 * N * N * N + h * (10.0 * N * N + h * (5.0 * N + h))) -
                           b * h * h * (3.0 * N + h);
        return d + rem;
    }
    double sigma_on_b_line(double xi, double d) const { return d + B.line(xi) + phi(xi, params); }
};

inline CounterexamplePair counterexample_pair(double N, const DispersionParams& params, int density) {
    if (!(N >= 4.0)) throw InvalidParameters("counterexample needs N >= 4");
    if (density < 8) throw InvalidParameters("lattice density must be at least 8 points per half-width");
    CounterexamplePair p;
    p.N = N;
    p.delta = std::pow(N, -1.5);
    p.density = density;
    p.params = params;
    const double slope = -phi_prime(N, params);
    p.A = ShearedRect{N, p.delta, slope, -phi(N, params) - slope * N, 0.5};
    p.B = ShearedRect{2.0 * p.delta, p.delta, slope, 0.0, 0.5};
    // Centre of the ξ-sumset [N, N + 4δ], where the overlap is widest.
    p.R = ShearedRect{N + 2.0 * p.delta, 0.25 * p.delta, slope, p.A.intercept, 0.5};
    return p;
}

/// Exact interval check that R's ξ-projection lies in the sumset of A's and B's.
inline bool sumset_contains_r(const CounterexamplePair& p) {
    return p.A.xi_lo() + p.B.xi_lo() <= p.R.xi_lo() && p.R.xi_hi() <= p.A.xi_hi() + p.B.xi_hi();
}

/// f*g sampled on the sumset lattice: ξ_m = A.lo + B.lo + (m+1)hξ, d_n = -1 + (n+1)hd.
struct ConvolutionPatch {
    double xi0 = 0.0;
    double xi_step = 0.0;
    double d0 = 0.0;
    double d_step = 0.0;
    std::size_t xi_count = 0;
    std::size_t d_count = 0;
    std::vector<double> values;

    double xi(std::size_t m) const { return xi0 + static_cast<double>(m) * xi_step; }
    double d(std::size_t n) const { return d0 + static_cast<double>(n) * d_step; }
    double operator()(std::size_t m, std::size_t n) const { return values[m * d_count + n]; }
};

inline ConvolutionPatch counterexample_convolution(const CounterexamplePair& p) {
    const std::size_t nx = p.xi_count();
    const std::size_t nd = p.d_count();
    std::size_t px = 1, pd = 1;
    while (px < 2 * nx) px <<= 1;
    while (pd < 2 * nd) pd <<= 1;

    std::vector<Complex> f(px * pd), g(px * pd);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nd; ++j) {
            const double d = p.d_at(j);
            const double xa = p.xi_a(i);
            const double xb = p.xi_b(i);
            f[i * pd + j] = p.A.contains(xa, p.A.line(xa) + d) ? 1.0 : 0.0;
            g[i * pd + j] = p.B.contains(xb, p.B.line(xb) + d) ? 1.0 : 0.0;
        }
    fft::transform_2d(f, px, pd, fft::Direction::forward);
    fft::transform_2d(g, px, pd, fft::Direction::forward);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] *= g[n];
    fft::transform_2d(f, px, pd, fft::Direction::backward);

    ConvolutionPatch out;
    out.xi_step = p.xi_step();
    out.d_step = p.d_step();
    out.xi0 = p.xi_a(0) + p.xi_b(0);
    out.d0 = 2.0 * p.d_at(0);
    out.xi_count = 2 * nx - 1;
    out.d_count = 2 * nd - 1;
    out.values.resize(out.xi_count * out.d_count);
    const double scale = out.xi_step * out.d_step / static_cast<double>(px * pd);
    for (std::size_t m = 0; m < out.xi_count; ++m)
        for (std::size_t n = 0; n < out.d_count; ++n)
            out.values[m * out.d_count + n] = std::max(0.0, f[m * pd + n].real() * scale);
    return out;
}

/// Smallest f*g over the lattice points of R.
inline double convolution_min_on_r(const CounterexamplePair& p, const ConvolutionPatch& c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.xi_count; ++i)
        for (std::size_t j = 0; j < c.d_count; ++j) {
            const double xi = c.xi(i);
            if (p.R.contains(xi, p.R.line(xi) + c.d(j))) m = std::min(m, c(i, j));
        }
    return m;
}

struct CounterexampleNorms {
    double lhs = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    /// The same norms with every weight frozen at the rectangle centre.
    double norm_a_constant = 0.0;
    double norm_b_constant = 0.0;
};

/// ‖χ_R ∂(u₁u₂)‖_{X_{s₁,b'}} for 𝔉u₁ = χ_A, 𝔉u₂ = χ_B (a lower bound for the full
/// left-hand side), and the X_{s,b} norms of the factors.
inline CounterexampleNorms counterexample_norms(const CounterexamplePair& p, const ConvolutionPatch& conv, double s,
                                                const NormParams& np) {
    CounterexampleNorms out;
    const double cell = p.xi_step() * p.d_step();
    double lhs = 0.0;
    for (std::size_t m = 0; m < conv.xi_count; ++m) {
        const double xi = conv.xi(m);
        const double wx = xi * xi * std::pow(bracket(xi), 2.0 * np.s1());
        for (std::size_t n = 0; n < conv.d_count; ++n) {
            if (!p.R.contains(xi, p.R.line(xi) + conv.d(n))) continue;
            const double sigma = p.sigma_on_a_line(xi, conv.d(n));
            const double v = conv(m, n) / (2.0 * pi);
            lhs += wx * std::pow(bracket(sigma), 2.0 * np.b_prime()) * v * v;
        }
    }
    out.lhs = std::sqrt(lhs * cell);

    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < p.xi_count(); ++i) {
        const double xa = p.xi_a(i);
        const double xb = p.xi_b(i);
        const double wa = std::pow(bracket(xa), 2.0 * s);
        const double wb = std::pow(bracket(xb), 2.0 * s);
        for (std::size_t j = 0; j < p.d_count(); ++j) {
            const double d = p.d_at(j);
            na += wa * std::pow(bracket(p.sigma_on_a_line(xa, d)), 2.0 * np.b());
            nb += wb * std::pow(bracket(p.sigma_on_b_line(xb, d)), 2.0 * np.b());
        }
    }
    out.norm_a = std::sqrt(na * cell);
    out.norm_b = std::sqrt(nb * cell);

    const double area = 2.0 * p.delta * 2.0 * p.A.band_half;
    out.norm_a_constant = std::pow(bracket(p.N), s) * std::sqrt(area);
    out.norm_b_constant = std::pow(bracket(p.B.xi_center), s) *
                          std::pow(bracket(p.sigma_on_b_line(p.B.xi_center, 0.0)), np.b()) * std::sqrt(area);
    return out;
}

struct SlopeRow {
    double s = 0.0;
    double epsilon = 0.0;
    double slope = 0.0;
    double residual = 0.0;
    double expected_slope = 0.0;
    bool noisy = false;
};

struct ScanPoint {
    double s = 0.0;
    double N = 0.0;
    double lhs = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    double ratio = 0.0;
    double ratio_constant = 0.0;
};

struct SlopeTable {
    std::vector<SlopeRow> rows;
    std::vector<ScanPoint> points;

    void write_csv(std::ostream& out) const {
        csv::Writer w(out, "s,epsilon,slope,residual,expected_slope");
        const int p = csv::slope_precision;
        for (const auto& r : rows)
            w.row(csv::sci(r.s, p), csv::sci(r.epsilon, p), csv::sci(r.slope, p), csv::sci(r.residual, p),
                  csv::sci(r.expected_slope, p));
    }

    void write_points_csv(std::ostream& out) const {
        csv::Writer w(out, "s,N,lhs,norm_a,norm_b,ratio,ratio_constant");
        for (const auto& q : points)
            w.row(csv::sci(q.s), csv::sci(q.N), csv::sci(q.lhs), csv::sci(q.norm_a), csv::sci(q.norm_b),
                  csv::sci(q.ratio), csv::sci(q.ratio_constant));
    }

    std::size_t noisy_count() const {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SlopeRow& r) { return r.noisy; }));
    }
};

/// Least-squares slope of y on x and the RMS residual.
inline std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

inline constexpr double noisy_fit_threshold = 0.2;

inline void require_scan_ladders(const std::vector<double>& s_values, const std::vector<double>& N_values,
                                 int density) {
    if (s_values.empty()) throw InvalidParameters("scan needs at least one s value");
    if (N_values.size() < 4) throw InvalidParameters("scan needs at least 4 values of N");
    if (!(N_values.front() >= 4.0)) throw InvalidParameters("counterexample needs N >= 4");
    const double q = N_values[1] / N_values[0];
    for (std::size_t i = 1; i < N_values.size(); ++i)
        if (!(q > 1.0) || std::abs(N_values[i] / N_values[i - 1] - q) > 1e-9 * q)
            throw InvalidParameters("N values must form an increasing geometric ladder");
    if (density < 8) throw InvalidParameters("lattice density must be at least 8 points per half-width");
}

/// Exponent of ratio ~ N^κ for each s; expected κ = -s - 1/2 + 3ε/4 at b = 1/2 + ε/2.
inline SlopeTable sharpness_scan(const std::vector<double>& s_values, const std::vector<double>& N_values,
                                 const NormParams& np, const DispersionParams& params, int density = 16,
                                 unsigned threads = 1) {
    require_scan_ladders(s_values, N_values, density);

    const std::size_t nN = N_values.size();
    const std::size_t ns = s_values.size();
    std::vector<ScanPoint> grid(nN * ns);
    parallel_for(nN, threads, [&](std::size_t i) {
        const auto pair = counterexample_pair(N_values[i], params, density);
        if (!sumset_contains_r(pair)) throw InvalidParameters("rectangle R escapes the sumset");
        const auto conv = counterexample_convolution(pair);
        for (std::size_t k = 0; k < ns; ++k) {
            const auto norms = counterexample_norms(pair, conv, s_values[k], np);
            ScanPoint& pt = grid[k * nN + i];
            pt.s = s_values[k];
            pt.N = N_values[i];
            pt.lhs = norms.lhs;
            pt.norm_a = norms.norm_a;
            pt.norm_b = norms.norm_b;
            pt.ratio = norms.lhs / (norms.norm_a * norms.norm_b);
            pt.ratio_constant = norms.lhs / (norms.norm_a_constant * norms.norm_b_constant);
        }
    });

    SlopeTable table;
    table.points = grid;
    for (std::size_t k = 0; k < ns; ++k) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < nN; ++i) {
            x.push_back(std::log(N_values[i]));
            y.push_back(std::log(grid[k * nN + i].ratio));
        }
        const auto [slope, residual] = fit_line(x, y);
        SlopeRow row;
        row.s = s_values[k];
        row.epsilon = np.epsilon();
        row.slope = slope;
        row.residual = residual;
        row.expected_slope = -s_values[k] - 2.5 * np.b() + 2.0 * np.epsilon() + 0.75;
        row.noisy = residual > noisy_fit_threshold;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace kawahara
