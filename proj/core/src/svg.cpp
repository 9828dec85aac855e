// svg.cpp — hand-rolled SVG emission; no styling beyond what reports need

#include "qme/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qme::svg {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

void write_svg(const Plot& plot, const std::string& path, int width, int height) {
    const int ml = 70, mr = 20, mt = 36, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;

    auto ty = [&](double v) { return plot.log_y ? std::log10(std::max(v, 1e-300)) : v; };

    Range rx, ry;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            rx.add(s.x[i]);
            ry.add(ty(s.y[i]));
            if (!s.band.empty()) {
                ry.add(ty(std::max(s.y[i] - s.band[i], plot.log_y ? s.y[i] * 1e-2 : s.y[i] - s.band[i])));
                ry.add(ty(s.y[i] + s.band[i]));
            }
            if (!s.yerr.empty()) {
                ry.add(ty(std::max(s.y[i] - s.yerr[i], plot.log_y ? s.y[i] * 1e-2 : s.y[i] - s.yerr[i])));
                ry.add(ty(s.y[i] + s.yerr[i]));
            }
        }
    if (!std::isfinite(rx.lo) || !std::isfinite(ry.lo))
        throw std::invalid_argument("write_svg: no finite data");
    rx.pad();
    ry.pad();

    auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double v) { return mt + ph - (ty(v) - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << plot.title << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double yv = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
        const double ylabel = plot.log_y ? std::pow(10.0, yv) : yv;
        out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph - i / 4.0 * ph + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(ylabel) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-size=\"12\">" << plot.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << mt + ph / 2
        << ")\">" << plot.y_label << "</text>\n";

    int ci = 0;
    for (const auto& s : plot.series) {
        const char* color = kColors[ci % 6];
        if (!s.band.empty()) {
            out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << px(s.x[i]) << ',' << py(s.y[i] + s.band[i]) << ' ';
            for (std::size_t i = s.x.size(); i-- > 0;) {
                const double lo = plot.log_y ? std::max(s.y[i] - s.band[i], s.y[i] * 1e-2)
                                             : s.y[i] - s.band[i];
                out << px(s.x[i]) << ',' << py(lo) << ' ';
            }
            out << "\"/>\n";
        }
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        out << "\"/>\n";
        if (!s.yerr.empty()) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double lo = plot.log_y ? std::max(s.y[i] - s.yerr[i], s.y[i] * 1e-2)
                                             : s.y[i] - s.yerr[i];
                out << "<line stroke=\"" << color << "\" x1=\"" << px(s.x[i]) << "\" y1=\""
                    << py(lo) << "\" x2=\"" << px(s.x[i]) << "\" y2=\"" << py(s.y[i] + s.yerr[i])
                    << "\"/>\n";
                out << "<circle fill=\"" << color << "\" cx=\"" << px(s.x[i]) << "\" cy=\""
                    << py(s.y[i]) << "\" r=\"2.5\"/>\n";
            }
        }
        out << "<text x=\"" << ml + pw - 6 << "\" y=\"" << mt + 14 + 14 * ci
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << s.label
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

} // namespace qme::svg
