#include "logguard/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace logguard {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void header(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
}

struct Range {
    double lo, hi;
};

Range padded(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        const double pad = std::max(std::abs(hi) * 0.05, 0.5);
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

void y_axis(std::ostringstream& out, Range y, const std::string& label) {
    const double plot_h = kHeight - kTop - kBottom;
    for (int i = 0; i <= 4; ++i) {
        const double v = y.lo + (y.hi - y.lo) * i / 4.0;
        const double py = kTop + plot_h * (1.0 - i / 4.0);
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << num(py) << "\" y2=\""
            << num(py) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick(v)
            << "</text>\n";
    }
    out << "<text transform=\"translate(16," << (kTop + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(label) << "</text>\n";
}

void legend(std::ostringstream& out, std::span<const Series> series) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = kTop + 10 + 20.0 * static_cast<double>(i);
        out << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\""
            << kPalette[i % std::size(kPalette)] << "\"/>\n";
        out << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << y + 1 << "\">" << escape(series[i].name)
            << "</text>\n";
    }
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           std::span<const Series> series, std::size_t max_points) {
    if (max_points < 2) throw std::invalid_argument("line chart needs at least two points per series");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const Range y = padded(lo, hi);
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    const double x_max = n > 1 ? static_cast<double>(n - 1) : 1.0;

    std::ostringstream out;
    header(out, title);
    y_axis(out, y, y_label);
    for (int i = 0; i <= 4; ++i) {
        const double px = kLeft + plot_w * i / 4.0;
        out << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
            << tick(x_max * i / 4.0) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& v = series[k].values;
        if (v.empty()) continue;
        const std::size_t stride = std::max<std::size_t>(1, (v.size() + max_points - 1) / max_points);
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[k % std::size(kPalette)]
            << "\" points=\"";
        for (std::size_t i = 0; i < v.size(); i += stride) {
            if (!std::isfinite(v[i])) continue;
            const double px = kLeft + plot_w * static_cast<double>(i) / x_max;
            const double py = kTop + plot_h * (1.0 - (v[i] - y.lo) / (y.hi - y.lo));
            out << num(px) << ',' << num(py) << ' ';
        }
        if ((v.size() - 1) % stride != 0 && std::isfinite(v.back())) {
            const double py = kTop + plot_h * (1.0 - (v.back() - y.lo) / (y.hi - y.lo));
            out << num(kLeft + plot_w * static_cast<double>(v.size() - 1) / x_max) << ',' << num(py);
        }
        out << "\"/>\n";
    }
    legend(out, series);
    out << "</svg>\n";
    return out.str();
}

std::string svg_bar_chart(const std::string& title, std::span<const std::string> categories,
                          std::span<const Series> series) {
    double hi = 0.0, lo = 0.0;
    for (const auto& s : series) {
        if (s.values.size() != categories.size()) throw std::invalid_argument("bar chart series/category mismatch");
        for (double v : s.values) {
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
    }
    const Range y = padded(lo, hi);
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    std::ostringstream out;
    header(out, title);
    y_axis(out, y, "");
    const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(series.size(), 1));
    auto to_y = [&](double v) { return kTop + plot_h * (1.0 - (v - y.lo) / (y.hi - y.lo)); };
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = kLeft + group_w * static_cast<double>(c) + group_w * 0.1;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double v = series[k].values[c];
            const double top = to_y(std::max(v, 0.0)), bottom = to_y(std::min(v, 0.0));
            out << "<rect x=\"" << num(gx + bar_w * static_cast<double>(k)) << "\" y=\"" << num(top)
                << "\" width=\"" << num(bar_w) << "\" height=\"" << num(bottom - top) << "\" fill=\""
                << kPalette[k % std::size(kPalette)] << "\"/>\n";
        }
        out << "<text x=\"" << num(gx + group_w * 0.4) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\">" << escape(categories[c]) << "</text>\n";
    }
    legend(out, series);
    out << "</svg>\n";
    return out.str();
}

}  // namespace logguard
