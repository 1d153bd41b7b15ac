#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curv/curvature.hpp"
#include "curv/dyadic.hpp"
#include "curv/measure.hpp"
#include "curv/polyline.hpp"
#include "curv/quadtree.hpp"

namespace curv {

struct CoronaParams {
    double threshold_a = 100.0;    // high-density multiplier
    double threshold_delta = 0.01; // low-density fraction
    double threshold_eps0 = 1e-4;  // concentration threshold on squared kernel sums
    double doubling_top_a = 16.0;
    double doubling_top_b = 5000.0;
    double doubling_center_a = 70.0;
    double doubling_center_b = 5000.0;
    double balance_a = 1.0 / 40.0;
    double balance_b = 1e-6 * 0.01 / 100.0; // 1e-6 * delta / a
    double ancestor_density_factor = 8.0;   // cap on delta(Q, ancestor) in units of a*theta(R)
};

enum class SquareClass { none, high_density, high_concentration, low_density };

struct Classification {
    SquareClass kind = SquareClass::none;
    double density_ratio = 0.0;   // theta(q) / theta(R)
    double heavy_fraction = 0.0;  // mass fraction with large truncated kernel sums
    std::optional<Box> sparse_square; // low-density witness enlargement
    double sparse_theta = 0.0;
};

struct BadSquare {
    DyadicSquare square;      // four-dyadic wrap
    Box core;                 // the classified square centered at an atom
    std::size_t center_atom = 0;
    Classification cls;
};

struct BadFamily {
    std::vector<BadSquare> squares;
    int besicovitch_overlap = 0; // over the kept full squares
    int half_overlap = 0;        // over their concentric halves
    std::size_t candidates_before_selection = 0;
    // every center-scan square that passed the doubling precheck, with mass
    std::vector<Box> scanned;
    std::vector<double> scanned_mass;
};

struct TopEntry {
    DyadicSquare square;
    SquareClass origin = SquareClass::none; // tag carried from the generating instance
    double mass = 0.0;
    double theta = 0.0;
    std::vector<std::size_t> stop;       // indices into the top list
    std::vector<std::size_t> good_atoms; // atoms of the tripled square outside every stop square
    int besicovitch_overlap = 0;         // half-square overlap of this square's selection
};

struct CoronaDecomposition {
    CoronaParams params;
    std::vector<TopEntry> top; // entry 0 is the root square, then in choice order
    long long generated_squares = 0;
    long long eliminated_squares = 0;
    double empirical_density_bound = 0.0; // max mu(P)/(a*theta(R)*side(P)) over scanned P meeting a bad square
};

struct PackingAudit {
    double lhs = 0.0;      // sum over top of theta^2 * mass
    double rhs_base = 0.0; // total mass + exact curvature
    double curvature = 0.0;
    double ratio = 0.0;
};

// Shared per-measure machinery reused across classification calls.
class CoronaContext {
public:
    explicit CoronaContext(const Measure& m, CoronaParams params = {});

    const Measure& measure() const { return m_; }
    const QuadTree& tree() const { return tree_; }
    const CoronaParams& params() const { return params_; }
    const KernelCache& kernel() const { return kernel_; }

    double box_mass(const Box& b) const { return tree_.mass_in_box(b); }
    DyadicSquare root_square() const;

private:
    const Measure& m_;
    CoronaParams params_;
    QuadTree tree_;
    KernelCache kernel_;
};

// Classify one square against its root; validates the documented preconditions.
Classification classify_square(const Measure& m, const Box& q, const DyadicSquare& root,
                               const CoronaParams& params = {});
Classification classify_square(const CoronaContext& ctx, const Box& q, const DyadicSquare& root);

// Largest classified square centered at each atom of the tripled root,
// wrapped four-dyadic and thinned by Besicovitch selection.
BadFamily build_bad(const CoronaContext& ctx, const DyadicSquare& root);

CoronaDecomposition build_top(const CoronaContext& ctx);
CoronaDecomposition build_top(const Measure& m, CoronaParams params = {});

PackingAudit packing_audit(const Measure& m, const CoronaDecomposition& d);

// Slowly varying stopping scale: inf over reference squares of side + dist/40,
// floored by dist to the retained good atoms / 40.
double stopping_scale(PlanarPoint x, const Box& root, const std::vector<Box>& stop_squares,
                      const std::vector<PlanarPoint>& good_atoms);

struct KSetResult {
    std::vector<PlanarPoint> points;
    std::vector<std::size_t> atom_indices;       // same order as points
    std::vector<Box> reference_squares;          // balanced ancestor (or the stop square itself)
    std::vector<bool> ancestor_fallback;         // true where the stop square was kept as-is
    std::vector<double> anchor_distance_ratio;   // dist(anchor, Q) / side(Q) per stop square
    double min_separation_ratio = 0.0;           // min over pairs of dist / max(side)
};

KSetResult k_set(const CoronaContext& ctx, const CoronaDecomposition& d, std::size_t top_index);

struct AllocationPiece {
    double alpha = 0.0;
    std::vector<ArcInterval> support;
    bool fallback = false; // level set was empty, spread over the whole clipped curve
};

struct AllocationResult {
    std::vector<AllocationPiece> pieces;
    double mass_error = 0.0;       // max relative defect of alpha * |support| vs requested mass
    double sup_density = 0.0;      // max of the final accumulated step function
    double max_alpha_ratio = 0.0;  // max alpha * side / mass over the pieces
};

// Spread the masses over the curve inside each enlarged square, each piece
// constant on the region where the running total is still below twice the
// density bound. Squares must come sorted by nondecreasing side.
AllocationResult allocate_on_curve(const std::vector<double>& masses,
                                   const std::vector<Box>& enlarged_squares,
                                   const Polyline& curve, double theta_bound);

} // namespace curv
