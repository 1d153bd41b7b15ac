#pragma once

// Slow, serial, independently coded counterparts of the library operations.
// Tests compare the fast paths against these; nothing here is tuned.

#include <vector>

#include "curv/measure.hpp"

namespace curvref {

// curvature as inverse circumradius, through the circumcenter construction
double menger_via_circumradius(curv::PlanarPoint a, curv::PlanarPoint b, curv::PlanarPoint c);

// ordered triples of distinct indices, every pair distance strictly above eps
double c2_direct(const curv::Measure& m, double eps);
long long c2_triples_direct(const curv::Measure& m, double eps);

double c2_point_direct(const curv::Measure& m, std::size_t index, double eps);

double c2_restricted_direct(const curv::Measure& m, const std::vector<std::size_t>& A,
                            const std::vector<std::size_t>& B,
                            const std::vector<std::size_t>& C);

struct MvDirect {
    double lhs = 0.0;
    double curvature_term = 0.0;
    double diagonal_term = 0.0;
};
MvDirect mv_direct(const curv::Measure& m, double eps);

// narrowest strip over sampled directions plus every pairwise direction
double strip_width_direct(const std::vector<curv::PlanarPoint>& pts, int sampled_directions);

double growth_direct(const curv::Measure& m, double min_radius);

std::vector<double> k_operator_direct(const curv::Measure& m, int j,
                                      const std::vector<double>& f);

// sum over atoms strictly farther than r of the curvature kernel times weight
double kernel_row_direct(const curv::Measure& m, std::size_t i, double r);

} // namespace curvref
