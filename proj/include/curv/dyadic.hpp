#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

// Dyadic square at level n: [i*2^-n, (i+1)*2^-n) x [j*2^-n, (j+1)*2^-n).
// With four_dyadic set the same (level, i, j) names the square of side
// 4*2^-n made of 16 level-n dyadic squares; its corner indices stay in
// units of 2^-n.
struct DyadicSquare {
    int level = 0;
    long long i = 0;
    long long j = 0;
    bool four_dyadic = false;

    double unit() const { return std::ldexp(1.0, -level); }
    double side() const { return unit() * (four_dyadic ? 4.0 : 1.0); }
    Box box() const {
        double u = unit();
        return {(double)i * u, (double)j * u, u * (four_dyadic ? 4.0 : 1.0)};
    }
    // concentric half square; for a four-dyadic square this is again a
    // union of 4 dyadic squares, with corners on the level-n grid
    Box half() const { return box().scaled(0.5); }
    PlanarPoint center() const {
        Box b = box();
        return b.center();
    }
    bool operator==(const DyadicSquare& o) const {
        return level == o.level && i == o.i && j == o.j && four_dyadic == o.four_dyadic;
    }
};

Box concentric_scale(const DyadicSquare& q, double lambda);

bool is_doubling(const Measure& m, const Box& q, double a, double b);
inline bool is_doubling(const Measure& m, const DyadicSquare& q, double a, double b) {
    return is_doubling(m, q.box(), a, b);
}

// Largest-side (a,b)-doubling dyadic square containing `center`, scanning
// levels from max_level (side 2^-max_level) down toward the measure's
// resolution. Grid-snapped: the level-n square is the one whose half-open
// cell holds the center.
std::optional<DyadicSquare> find_doubling_square(const Measure& m, PlanarPoint center,
                                                 double a, double b, int max_level);

enum class BalanceOutcome { balanced, unbalanced };

struct BalanceWitness {
    BalanceOutcome outcome;
    // balanced: two far-apart heavy cells
    Box q1, q2;
    double mass1 = 0.0, mass2 = 0.0;
    double cell_distance = 0.0;
    // unbalanced: concentration square
    Box p;
    double mass_p = 0.0;
    double mass_q = 0.0;
};

// Partitions q into 400x400 cells, looks for two cells of mass >= b*mu(q)
// at distance >= a*l(q). When no such pair exists, returns a square P of
// side <= l(q)/10 holding all heavy cells, so mu(P) >= (1-2e5*b)*mu(q).
BalanceWitness balance_test(const Measure& m, const Box& q, double a, double b);

// Smallest concentric doubling 2^n q, n >= 1, with side <= 8*l(R) that
// passes balance_test; nullopt when none does.
std::optional<Box> find_balanced_ancestor(const Measure& m, const Box& q, const Box& R,
                                          double a, double b);

struct BesicovitchCandidate {
    DyadicSquare square;
    PlanarPoint center;
};

struct BesicovitchResult {
    std::vector<std::size_t> kept; // indices into the candidate list
    int overlap = 0;               // max number of kept squares over any point
    int half_overlap = 0;          // same, counting the concentric half squares
};

// Greedy Besicovitch-type selection: walk candidates by decreasing side
// (ties by level, i, j), keep one unless its center is already covered.
// Every candidate center ends up covered and the kept family has small
// overlap, reported exactly.
BesicovitchResult besicovitch_select(const std::vector<BesicovitchCandidate>& candidates);

// Smallest dyadic square containing the box, as seen on the dyadic grid.
// Throws when the box straddles a coordinate axis: dyadic squares never
// cross 0, so such data needs translating first.
DyadicSquare enclosing_dyadic(const Box& b);

// Smallest four-dyadic square whose concentric half contains the box.
DyadicSquare enclosing_four_dyadic_half(const Box& b);

} // namespace curv
