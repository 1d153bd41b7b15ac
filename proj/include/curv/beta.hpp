#pragma once

#include <string>
#include <vector>

#include "curv/dyadic.hpp"
#include "curv/measure.hpp"

namespace curv {

// Flatness of the points inside the tripled square: narrowest-strip width
// over the square side. Fewer than 3 points inside means exactly flat.
double beta_number(const std::vector<PlanarPoint>& pts, const Box& q);

struct BetaLevelRow {
    int level = 0;
    long long count = 0;       // squares visited on this level
    double max_beta = 0.0;
    double weighted_sum = 0.0; // sum of beta^2 * side
};

struct BetaReport {
    DyadicSquare start;
    double criterion_sum = 0.0; // sum of beta^2 * side over visited squares
    double normalized = 0.0;    // criterion_sum / start side
    long long visited = 0;
    std::vector<BetaLevelRow> rows;
};

// Walk the dyadic tree from the smallest square enclosing the points down to
// side 2^-max_depth, skipping squares whose tripled box holds no points.
BetaReport beta_criterion(const std::vector<PlanarPoint>& pts, int max_depth);

std::string beta_level_csv(const BetaReport& rep);

} // namespace curv
