#pragma once

// Static SVG renderings of experiment CSVs. Conveniences only: nothing
// downstream reads them back.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kawahara/errors.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara::lab {

enum class PlotKind { loglog_slope, ladder_decay, field_snapshot };

inline PlotKind parse_plot_kind(std::string_view name) {
    if (name == "loglog-slope") return PlotKind::loglog_slope;
    if (name == "ladder-decay") return PlotKind::ladder_decay;
    if (name == "field-snapshot") return PlotKind::field_snapshot;
    throw InvalidParameters("unknown plot kind '" + std::string(name) + "'");
}

namespace plot_detail {

struct Table {
    std::string header;
    std::vector<std::vector<double>> rows;
};

inline Table read_csv(const std::filesystem::path& path, const std::vector<std::string>& accepted) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    Table t;
    std::getline(in, t.header);
    if (std::find(accepted.begin(), accepted.end(), t.header) == accepted.end()) {
        std::string expected;
        for (const auto& h : accepted) expected += (expected.empty() ? "" : " or ") + ("'" + h + "'");
        throw InvalidInput("schema mismatch in " + path.filename().string() + ": expected header " + expected);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw InvalidInput("no rows");
    return t;
}

struct Series {
    std::string label;
    std::vector<double> x, y;
};

/// Canvas for one log-log (or linear) panel at a vertical offset.
class Svg {
public:
    static constexpr double width = 640, panel_height = 320, margin = 56;

    explicit Svg(std::size_t panels) : height_(panel_height * static_cast<double>(std::max<std::size_t>(panels, 1))) {}

    void panel(std::size_t index, const std::string& title, const std::vector<Series>& series, const std::string& xlabel,
               const std::string& ylabel) {
        const double top = panel_height * static_cast<double>(index);
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const auto& s : series)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
                x0 = std::min(x0, std::log10(s.x[i]));
                x1 = std::max(x1, std::log10(s.x[i]));
                y0 = std::min(y0, std::log10(s.y[i]));
                y1 = std::max(y1, std::log10(s.y[i]));
            }
        if (!(x1 >= x0)) x0 = 0, x1 = 1;
        if (!(y1 >= y0)) y0 = 0, y1 = 1;
        if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
        if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
        const double w = width - 2 * margin, h = panel_height - 2 * margin;
        auto px = [&](double v) { return margin + w * (std::log10(v) - x0) / (x1 - x0); };
        auto py = [&](double v) { return top + margin + h * (1.0 - (std::log10(v) - y0) / (y1 - y0)); };

        body_ << "<rect x='" << margin << "' y='" << top + margin << "' width='" << w << "' height='" << h
              << "' fill='none' stroke='#444'/>\n";
        body_ << "<text x='" << width / 2 << "' y='" << top + margin - 12 << "' text-anchor='middle'>" << title
              << "</text>\n";
        body_ << "<text x='" << width / 2 << "' y='" << top + panel_height - 14 << "' text-anchor='middle'>" << xlabel
              << " (log10 " << fmt(x0) << " .. " << fmt(x1) << ")</text>\n";
        body_ << "<text x='14' y='" << top + panel_height / 2 << "' transform='rotate(-90 14 " << top + panel_height / 2
              << ")' text-anchor='middle'>" << ylabel << " (log10 " << fmt(y0) << " .. " << fmt(y1) << ")</text>\n";
        for (std::size_t k = 0; k < series.size(); ++k) {
            const auto& s = series[k];
            const char* colour = palette[k % palette.size()];
            std::ostringstream pts;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (s.x[i] > 0.0 && s.y[i] > 0.0) pts << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            body_ << "<polyline fill='none' stroke='" << colour << "' points='" << pts.str() << "'/>\n";
            body_ << "<text x='" << width - margin + 4 << "' y='" << top + margin + 14 * (k + 1) << "' fill='" << colour
                  << "' font-size='10'>" << s.label << "</text>\n";
        }
    }

    std::ostringstream& body() { return body_; }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height_
            << "' font-family='sans-serif' font-size='12'>\n"
            << body_.str() << "</svg>\n";
    }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }

private:
    static constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    double height_;
    std::ostringstream body_;
};

inline void loglog_slope(const Table& t, const std::filesystem::path& out) {
    // s,N,lhs,norm_a,norm_b,ratio,ratio_constant
    std::map<double, Series> by_s;
    for (const auto& r : t.rows) {
        auto& s = by_s[r[0]];
        s.label = "ratio";
        s.x.push_back(r[1]);
        s.y.push_back(r[5]);
    }
    Svg svg(by_s.size());
    std::size_t i = 0;
    for (const auto& [s, series] : by_s) svg.panel(i++, "s = " + Svg::fmt(s), {series}, "N", "ratio");
    svg.save(out);
}

inline void ladder_decay(const Table& t, const std::filesystem::path& out) {
    std::vector<Series> series;
    std::string xlabel;
    if (t.rows.front().size() == 4) {
        // t_max,lambda,measure,chebyshev_bound: one curve per λ, measure against t_max.
        std::map<double, Series> by_lambda;
        for (const auto& r : t.rows) {
            auto& s = by_lambda[r[1]];
            s.label = "lambda " + Svg::fmt(r[1]);
            s.x.push_back(r[0]);
            s.y.push_back(r[2]);
        }
        for (auto& [l, s] : by_lambda) series.push_back(std::move(s));
        xlabel = "t_max";
    } else {
        Series s;
        s.label = t.header.substr(t.header.find(',') + 1);
        for (const auto& r : t.rows) {
            s.x.push_back(r[0]);
            s.y.push_back(r[1]);
        }
        series.push_back(std::move(s));
        xlabel = t.header.substr(0, t.header.find(','));
    }
    Svg svg(1);
    svg.panel(0, "ladder decay", series, xlabel, "value");
    svg.save(out);
}

inline void field_snapshot(const Table& t, const std::filesystem::path& out) {
    // t,k,xi,re,im in FFT order per time.
    std::vector<double> times;
    for (const auto& r : t.rows)
        if (times.empty() || r[0] != times.back()) times.push_back(r[0]);
    const std::size_t M = t.rows.size() / times.size();
    if (M * times.size() != t.rows.size() || M < 8) throw InvalidInput("schema mismatch: ragged trajectory rows");
    const double dxi = M > 1 ? std::abs(t.rows[1][2] - t.rows[0][2]) : 1.0;
    const GridSpec grid(pi / dxi, M);
    std::vector<std::vector<double>> mag(times.size());
    double top = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n) {
        SpectralField1D u(grid);
        for (std::size_t i = 0; i < M; ++i) u[i] = Complex{t.rows[n * M + i][3], t.rows[n * M + i][4]};
        for (const auto& v : to_physical(u)) {
            mag[n].push_back(std::abs(v));
            top = std::max(top, std::abs(v));
        }
    }
    Svg svg(1);
    const double w = Svg::width - 2 * Svg::margin, h = Svg::panel_height - 2 * Svg::margin;
    // Coarsen to at most 256 x 128 cells by taking the max over each block.
    const std::size_t sx = std::max<std::size_t>(1, M / 256), st = std::max<std::size_t>(1, (times.size() + 127) / 128);
    const std::size_t cols = M / sx, rows = (times.size() + st - 1) / st;
    const double cw = w / static_cast<double>(cols), ch = h / static_cast<double>(rows);
    auto& body = svg.body();
    body << "<text x='" << Svg::width / 2 << "' y='" << Svg::margin - 12 << "' text-anchor='middle'>|u| over x (across) and t (down), max "
         << Svg::fmt(top) << "</text>\n";
    for (std::size_t n = 0; n < rows; ++n)
        for (std::size_t j = 0; j < cols; ++j) {
            double cell = 0.0;
            for (std::size_t a = n * st; a < std::min(times.size(), (n + 1) * st); ++a)
                for (std::size_t b = j * sx; b < (j + 1) * sx; ++b) cell = std::max(cell, mag[a][b]);
            const int level = top > 0.0 ? static_cast<int>(std::lround(255.0 * (1.0 - cell / top))) : 255;
            body << "<rect x='" << Svg::fmt(Svg::margin + cw * static_cast<double>(j)) << "' y='"
                 << Svg::fmt(Svg::margin + ch * static_cast<double>(n)) << "' width='" << Svg::fmt(cw * 1.02)
                 << "' height='" << Svg::fmt(ch * 1.02) << "' fill='rgb(" << level << ',' << level << ",255)'/>\n";
        }
    svg.save(out);
}

}  // namespace plot_detail

/// Renders `csv` as an SVG next to it (same stem, .svg) and returns that path.
inline std::filesystem::path emit_plot(const std::filesystem::path& csv, PlotKind kind) {
    auto out = csv;
    out.replace_extension(".svg");
    switch (kind) {
        case PlotKind::loglog_slope:
            plot_detail::loglog_slope(plot_detail::read_csv(csv, {"s,N,lhs,norm_a,norm_b,ratio,ratio_constant"}), out);
            break;
        case PlotKind::ladder_decay:
            plot_detail::ladder_decay(
                plot_detail::read_csv(csv, {"N,error", "t,sup_diff", "t_max,lambda,measure,chebyshev_bound"}), out);
            break;
        case PlotKind::field_snapshot:
            plot_detail::field_snapshot(plot_detail::read_csv(csv, {"t,k,xi,re,im"}), out);
            break;
    }
    return out;
}

}  // namespace kawahara::lab
