#pragma once

#include <vector>

#include "curv/measure.hpp"

namespace curv {

struct Strip {
    double dir_x = 1.0; // unit direction of the strip axis
    double dir_y = 0.0;
    double lo = 0.0; // projection interval onto the normal
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// 1/circumradius of the triple, 0 for coincident or collinear points.
// Evaluated as 2*dist(x, line(y,z)) / (|x-y| |x-z|) after sorting the
// points, so all 6 permutations give bitwise identical results.
double menger_curvature(PlanarPoint x, PlanarPoint y, PlanarPoint z);

// squared curvature without the square root; same conventions
double menger_curvature_sq(PlanarPoint x, PlanarPoint y, PlanarPoint z);

// exact twice-the-signed-area of the triangle (error-free via fma)
double cross2(double ux, double uy, double vx, double vy);

// narrowest strip containing the points; flush with a hull edge
Strip min_width_strip(const std::vector<PlanarPoint>& points);

enum class PerturbationOutcome { holds, fails, inapplicable };

// checks |c(x,y,z) - c(x',y,z)| <= (4+2c6)|x-x'| / (|x-y| |x-z|),
// applicable when |x'-y| is within a factor c6 of |x-y|
PerturbationOutcome curvature_perturbation_check(PlanarPoint x, PlanarPoint x_prime,
                                                 PlanarPoint y, PlanarPoint z, double c6);

} // namespace curv
