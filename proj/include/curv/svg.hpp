#pragma once

#include <string>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

struct SvgBox {
    Box box;
    std::string color = "#888888";
};

// Compact standalone picture of a measure with optional square overlays;
// marker area tracks atom weight.
std::string render_svg(const Measure& m, const std::vector<SvgBox>& boxes);
void save_svg(const std::string& path, const Measure& m, const std::vector<SvgBox>& boxes);

} // namespace curv
