#include "curv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curv/errors.hpp"

namespace curv {

std::string render_svg(const Measure& m, const std::vector<SvgBox>& boxes) {
    double minx = 0, miny = 0, maxx = 1, maxy = 1;
    bool first = true;
    auto grow = [&](double x, double y) {
        if (first) {
            minx = maxx = x;
            miny = maxy = y;
            first = false;
        } else {
            minx = std::min(minx, x);
            maxx = std::max(maxx, x);
            miny = std::min(miny, y);
            maxy = std::max(maxy, y);
        }
    };
    for (const Atom& a : m.atoms())
        grow(a.p.x, a.p.y);
    for (const SvgBox& sb : boxes) {
        grow(sb.box.x0, sb.box.y0);
        grow(sb.box.x0 + sb.box.side, sb.box.y0 + sb.box.side);
    }
    double span = std::max({maxx - minx, maxy - miny, 1e-12});
    double pad = span * 0.05;
    minx -= pad;
    miny -= pad;
    span += 2 * pad;
    const double view = 800.0;
    double scale = view / span;
    // y flips so larger y draws higher
    auto X = [&](double x) { return (x - minx) * scale; };
    auto Y = [&](double y) { return view - (y - miny) * scale; };

    double wmax = 0.0;
    for (const Atom& a : m.atoms())
        wmax = std::max(wmax, a.w);

    std::ostringstream out;
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    for (const SvgBox& sb : boxes) {
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                      "fill=\"none\" stroke=\"%s\" stroke-width=\"1\"/>\n",
                      X(sb.box.x0), Y(sb.box.y0 + sb.box.side), sb.box.side * scale,
                      sb.box.side * scale, sb.color.c_str());
        out << buf;
    }
    for (const Atom& a : m.atoms()) {
        double r = wmax > 0.0 ? 1.0 + 3.0 * std::sqrt(a.w / wmax) : 2.0;
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#205080\" "
                      "fill-opacity=\"0.7\"/>\n",
                      X(a.p.x), Y(a.p.y), r);
        out << buf;
    }
    out << "</svg>\n";
    return out.str();
}

void save_svg(const std::string& path, const Measure& m, const std::vector<SvgBox>& boxes) {
    std::ofstream out(path);
    if (!out)
        throw bad_input("cannot write " + path);
    out << render_svg(m, boxes);
}

} // namespace curv
