#include "fidelim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fidelim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

struct Range {
    double lo{0.0};
    double hi{1.0};
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

void expand(Range& r, const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) continue;
        r.lo = std::min(r.lo, x);
        r.hi = std::max(r.hi, x);
    }
}

}  // namespace

void write_svg(std::ostream& os, const SvgFigure& fig) {
    Range xr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Range yr{0.0, 1.0};
    for (const auto& b : fig.bands) {
        expand(xr, b.x);
        expand(yr, b.lower);
        expand(yr, b.upper);
    }
    for (const auto& c : fig.curves) {
        expand(xr, c.x);
        expand(yr, c.y);
    }
    if (!std::isfinite(xr.lo) || xr.hi <= xr.lo) {
        xr = {0.0, 1.0};
    }
    if (yr.hi <= yr.lo) yr.hi = yr.lo + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto sy = [&](double y) {
        return kHeight - kMarginBottom - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

    // bands as closed polygons: upper path forward, lower path reversed
    for (const auto& b : fig.bands) {
        os << "<polygon fill=\"" << b.fill << "\" fill-opacity=\"" << fmt(b.opacity)
           << "\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            os << fmt(sx(b.x[i])) << ',' << fmt(sy(b.upper[i])) << ' ';
        }
        for (std::size_t i = b.x.size(); i-- > 0;) {
            os << fmt(sx(b.x[i])) << ',' << fmt(sy(b.lower[i]));
            if (i != 0) os << ' ';
        }
        os << "\"/>\n";
    }

    for (const auto& c : fig.curves) {
        os << "<polyline fill=\"none\" stroke=\"" << c.stroke << "\" stroke-width=\""
           << fmt(c.width) << "\" points=\"";
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (i) os << ' ';
            os << fmt(sx(c.x[i])) << ',' << fmt(sy(c.y[i]));
        }
        os << "\"/>\n";
    }

    // axes
    os << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kHeight - kMarginBottom)
       << "\" x2=\"" << fmt(kWidth - kMarginRight) << "\" y2=\""
       << fmt(kHeight - kMarginBottom) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\""
       << fmt(kMarginLeft) << "\" y2=\"" << fmt(kHeight - kMarginBottom)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    const int n_ticks = 6;
    for (int t = 0; t < n_ticks; ++t) {
        const double frac = static_cast<double>(t) / (n_ticks - 1);
        const double xv = xr.lo + frac * (xr.hi - xr.lo);
        const double px = sx(xv);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kHeight - kMarginBottom)
           << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(kHeight - kMarginBottom + 6)
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kHeight - kMarginBottom + 20)
           << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";

        const double yv = yr.lo + frac * (yr.hi - yr.lo);
        const double py = sy(yv);
        os << "<line x1=\"" << fmt(kMarginLeft - 6) << "\" y1=\"" << fmt(py) << "\" x2=\""
           << fmt(kMarginLeft) << "\" y2=\"" << fmt(py)
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << fmt(kMarginLeft - 10) << "\" y=\"" << fmt(py + 4)
           << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
    }

    os << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 12)
       << "\" font-size=\"14\" text-anchor=\"middle\">" << fig.x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt(kMarginTop + plot_h / 2)
       << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt(kMarginTop + plot_h / 2) << ")\">" << fig.y_label << "</text>\n";
    os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" font-size=\"16\" "
       << "text-anchor=\"middle\">" << fig.title << "</text>\n";

    // legend
    double ly = kMarginTop + 10.0;
    const double lx = kWidth - kMarginRight - 180.0;
    for (const auto& b : fig.bands) {
        if (b.label.empty()) continue;
        os << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 9) << "\" width=\"18\" "
           << "height=\"10\" fill=\"" << b.fill << "\" fill-opacity=\"" << fmt(b.opacity)
           << "\"/>\n";
        os << "<text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly) << "\" font-size=\"12\">"
           << b.label << "</text>\n";
        ly += 16.0;
    }
    for (const auto& c : fig.curves) {
        if (c.label.empty()) continue;
        os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
           << fmt(lx + 18) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << c.stroke
           << "\" stroke-width=\"" << fmt(c.width) << "\"/>\n";
        os << "<text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly) << "\" font-size=\"12\">"
           << c.label << "</text>\n";
        ly += 16.0;
    }

    os << "</svg>\n";
}

}  // namespace fidelim
