#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

// Four-corner Cantor set at the given generation: 4^g atoms of weight 4^-g
// at the centers of the corner cells of side 4^-g inside the unit square.
Measure cantor4(int generation);

// n evenly spaced atoms on the unit segment of the x axis, weight 1/n.
Measure segment_measure(int n);

// n atoms evenly spread on the circle of radius 0.4 around (1/2, 1/2).
Measure circle_measure(int n);

// n samples (x, A(x)) with x = i/(n-1), A piecewise linear through the
// breakpoints with constant extension, weight 1/n.
Measure lipschitz_graph_measure(const std::vector<PlanarPoint>& breakpoints, int n);

// k x k unit-square lattice of cell centers, weight 1/k^2, rows bottom-up.
Measure grid_measure(int k);

// n uniform draws from the unit square, weight 1/n, fixed by the seed.
Measure random_cloud(int n, std::uint64_t seed);

// Spec strings: cantor4:G  segment:N  circle:N  grid:K  cloud:N
//               graph:x,y;x,y;...:N
Measure parse_generator(const std::string& spec, std::uint64_t seed);

} // namespace curv
