// svg.hpp — minimal static SVG plotting: filled band polygons and polyline
// curves in a fixed 800x600 viewBox with labeled axes. No external plotting
// dependency; CSV stays the canonical output.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fidelim {

struct SvgBand {
    std::vector<double> x;
    std::vector<double> lower;
    std::vector<double> upper;
    std::string fill;     // e.g. "#1f77b4"
    double opacity{0.3};
    std::string label;
};

struct SvgCurve {
    std::vector<double> x;
    std::vector<double> y;
    std::string stroke;
    double width{1.5};
    std::string label;
};

struct SvgFigure {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgBand> bands;
    std::vector<SvgCurve> curves;
};

void write_svg(std::ostream& os, const SvgFigure& fig);

}  // namespace fidelim
