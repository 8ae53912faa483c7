#pragma once

// Discrete Sobolev, X_{s,b} and mixed Lebesgue norms, the three-wave
// resonance function, and resolution-stability ratio reports.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "kawahara/csv.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/parallel.hpp"
#include "kawahara/spacetime.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Exponents of a bilinear/Strichartz check. b defaults to 1/2 + ε/2, the
/// value under which the low-regularity bilinear bound is proved.
class NormParams {
public:
    NormParams(double s, double epsilon, double D = 4.0, double s2 = std::numeric_limits<double>::quiet_NaN(),
               double b = std::numeric_limits<double>::quiet_NaN())
        : s_(s), epsilon_(epsilon), D_(D) {
        if (!(epsilon > 0.0) || !(epsilon < 0.25)) throw InvalidParameters("epsilon must lie in (0, 1/4)");
        b_ = std::isnan(b) ? 0.5 + 0.5 * epsilon : b;
        s2_ = std::isnan(s2) ? -0.5 + epsilon : s2;
        if (!(b_prime() < 0.0 && 0.0 < b_)) throw InvalidParameters("need b' < 0 < b");
    }

    double s() const noexcept { return s_; }
    double b() const noexcept { return b_; }
    double epsilon() const noexcept { return epsilon_; }
    double b_prime() const noexcept { return -0.5 + 2.0 * epsilon_; }
    double s1() const noexcept { return 0.5 + 2.0 * epsilon_; }
    double s2() const noexcept { return s2_; }
    double D() const noexcept { return D_; }

    /// Throws unless D ≥ 4a for the given dispersion.
    void require_threshold(const DispersionParams& params) const {
        if (!(D_ >= 4.0 * params.a())) throw InvalidParameters("D must be at least 4a");
    }

private:
    double s_;
    double b_;
    double epsilon_;
    double D_;
    double s2_;
};

inline double sobolev_norm(const SpectralField1D& u, double s) {
    const GridSpec& grid = u.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += std::pow(bracket(grid.xi(i)), 2.0 * s) * std::norm(u[i]);
    return std::sqrt(sum * grid.frequency_step());
}

/// Modulation τ + φ(ξ) reduced to the alias of τ nearest the dispersion
/// surface. A time-sampled signal only fixes τ modulo the sampling
/// frequency; measuring σ on the nearest alias keeps the weight meaningful
/// when max|φ| far exceeds π/h.
inline double modulation(double xi, double tau, double tau_period, const DispersionParams& params) {
    const double raw = tau + phi(xi, params);
    return raw - tau_period * std::nearbyint(raw / tau_period);
}

inline double xsb_norm(const SpaceTimeSpectrum& F, double s, double b, const DispersionParams& params) {
    const double period = F.time().frequency_step() * static_cast<double>(F.cols());
    double sum = 0.0;
    for (std::size_t k = 0; k < F.rows(); ++k) {
        const double xi = F.xi(k);
        const double wx = std::pow(bracket(xi), 2.0 * s);
        double row = 0.0;
        for (std::size_t j = 0; j < F.cols(); ++j) {
            const double sigma = modulation(xi, F.tau(j), period, params);
            row += std::pow(bracket(sigma), 2.0 * b) * std::norm(F(k, j));
        }
        sum += wx * row;
    }
    return std::sqrt(sum * F.cell());
}

/// |φ(ξ₁+ξ₂) − φ(ξ₁) − φ(ξ₂)| in factored form.
inline double resonance_gap(double xi1, double xi2, const DispersionParams& params) {
    const double xi = xi1 + xi2;
    const double alpha = params.alpha();
    const double quad = xi * xi + xi1 * xi1 - xi * xi1 - 3.0 * params.beta() / (5.0 * alpha);
    return 5.0 * std::abs(alpha) * std::abs(xi) * std::abs(xi1) * std::abs(xi2) * std::abs(quad);
}

enum class MixedOrder { x_outer, t_outer };

inline bool supported_exponent(double p) { return p == 2.0 || p == 4.0 || p == 12.0 || p == infinity; }

namespace detail {

class LpAccumulator {
public:
    LpAccumulator(double p, double weight) : p_(p), weight_(weight) {}
    void add(double v) {
        if (p_ == infinity) acc_ = std::max(acc_, v);
        else acc_ += std::pow(v, p_);
    }
    double result() const { return p_ == infinity ? acc_ : std::pow(acc_ * weight_, 1.0 / p_); }

private:
    double p_;
    double weight_;
    double acc_ = 0.0;
};

}  // namespace detail

/// Iterated Lebesgue norm with left Riemann weights dx, h.
/// x_outer is ‖‖u‖_{L^{pt}_t}‖_{L^{px}_x}; t_outer swaps the nesting.
inline double mixed_norm(const SpaceTimeSamples& u, double px, double pt, MixedOrder order) {
    if (!supported_exponent(px) || !supported_exponent(pt))
        throw InvalidInput("unsupported exponent pair (" + std::to_string(px) + ", " + std::to_string(pt) +
                           "); exponents must be 2, 4, 12 or inf");
    const std::size_t m = u.grid.points();
    const std::size_t n = u.time.count;
    const double dx = u.grid.dx();
    const double h = u.time.step;
    if (order == MixedOrder::x_outer) {
        detail::LpAccumulator outer(px, dx);
        for (std::size_t i = 0; i < m; ++i) {
            detail::LpAccumulator inner(pt, h);
            for (std::size_t l = 0; l < n; ++l) inner.add(std::abs(u(i, l)));
            outer.add(inner.result());
        }
        return outer.result();
    }
    detail::LpAccumulator outer(pt, h);
    for (std::size_t l = 0; l < n; ++l) {
        detail::LpAccumulator inner(px, dx);
        for (std::size_t i = 0; i < m; ++i) inner.add(std::abs(u(i, l)));
        outer.add(inner.result());
    }
    return outer.result();
}

struct RatioEntry {
    std::size_t sample_id = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::size_t resolution = 0;
};

struct RatioReport {
    std::vector<RatioEntry> entries;
    std::array<std::size_t, 2> resolutions{};
    std::array<double, 2> max_ratio{};
    /// log₂(max ratio at the fine level / max ratio at the coarse level).
    double slope = 0.0;
    std::size_t skipped = 0;

    double overall_max() const { return std::max(max_ratio[0], max_ratio[1]); }

    void write_csv(std::ostream& out) const {
        csv::Writer w(out, "sample_id,lhs,rhs,ratio,resolution");
        for (const auto& e : entries) w.row(e.sample_id, csv::sci(e.lhs), csv::sci(e.rhs), csv::sci(e.ratio), e.resolution);
    }
};

/// Evaluate lhs/rhs for `count` family members at two resolution levels.
/// make(id, level) builds sample `id` at level 0 (coarse) or 1 (fine);
/// samples with rhs == 0 are skipped and counted.
template <class Make, class Lhs, class Rhs>
RatioReport estimate_ratio(std::size_t count, std::array<std::size_t, 2> resolutions, Make&& make, Lhs&& lhs,
                           Rhs&& rhs, unsigned threads = 1) {
    if (count == 0) throw InvalidInput("family must be nonempty");
    struct Slot {
        double lhs = 0.0, rhs = 0.0;
    };
    std::vector<Slot> slots(2 * count);
    parallel_for(2 * count, threads, [&](std::size_t task) {
        const std::size_t id = task / 2;
        const int level = static_cast<int>(task % 2);
        const auto sample = make(id, level);
        slots[task].rhs = rhs(sample);
        if (slots[task].rhs != 0.0) slots[task].lhs = lhs(sample);
    });

    RatioReport report;
    report.resolutions = resolutions;
    for (int level = 0; level < 2; ++level) {
        for (std::size_t id = 0; id < count; ++id) {
            const Slot& s = slots[2 * id + static_cast<std::size_t>(level)];
            if (s.rhs == 0.0) {
                ++report.skipped;
                continue;
            }
            const double r = s.lhs / s.rhs;
            report.entries.push_back({id, s.lhs, s.rhs, r, resolutions[static_cast<std::size_t>(level)]});
            report.max_ratio[static_cast<std::size_t>(level)] =
                std::max(report.max_ratio[static_cast<std::size_t>(level)], r);
        }
    }
    if (report.max_ratio[0] > 0.0 && report.max_ratio[1] > 0.0)
        report.slope = std::log2(report.max_ratio[1] / report.max_ratio[0]);
    return report;
}

}  // namespace kawahara
