#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "curv/corona.hpp"
#include "curv/generators.hpp"
#include "test_helpers.hpp"

using namespace curv;

namespace {

bool same_square(const DyadicSquare& a, const DyadicSquare& b) {
    return a.level == b.level && a.i == b.i && a.j == b.j && a.four == b.four;
}

std::vector<std::size_t> atoms_outside_stops(const CoronaContext& ctx, const TopEntry& R,
                                             const CoronaDecomposition& d) {
    Box triple = R.square.box().scaled(3.0);
    std::vector<std::size_t> out;
    const auto& atoms = ctx.measure().atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!triple.contains(atoms[i].p))
            continue;
        bool covered = false;
        for (std::size_t s : R.stop)
            if (d.top[s].square.box().contains(atoms[i].p))
                covered = true;
        if (!covered)
            out.push_back(i);
    }
    return out;
}

} // namespace

TEST_CASE("root square centers the measure") {
    Measure m = cantor4(2);
    CoronaContext ctx(m);
    DyadicSquare R = ctx.root_square();
    Box b = R.box();
    for (const Atom& a : m.atoms())
        CHECK(b.contains(a.p));
    CHECK(R.four);
    // no atom in the outer frame: everything sits inside the middle fourth
    Box mid{b.x0 + b.side * 0.25, b.y0 + b.side * 0.25, b.side * 0.5};
    for (const Atom& a : m.atoms())
        CHECK(mid.contains(a.p));
}

TEST_CASE("classification rejects undersized or off-grid squares") {
    Measure m = cantor4(2);
    CoronaContext ctx(m);
    DyadicSquare R = ctx.root_square();
    PlanarPoint c = m.atoms()[0].p;
    double unit = R.side();
    // side not a power-of-two fraction of the root
    CHECK_THROWS_AS(classify_square(ctx, box_centered(c, unit / 3.0), R), precondition_error);
    // too close to the root scale
    CHECK_THROWS_AS(classify_square(ctx, box_centered(c, unit / 8.0), R), precondition_error);
    // not centered at an atom of the tripled root
    CHECK_THROWS_AS(classify_square(ctx, box_centered({-3.0, -3.0}, unit / 64.0), R),
                    precondition_error);
    // centered and admissible: must classify into something
    Classification cls = classify_square(ctx, box_centered(c, unit / 64.0), R);
    CHECK(cls.kind != SquareClass::none);
}

TEST_CASE("a concentrated clump classifies as high density") {
    // nearly all mass inside a tiny square around one atom
    std::vector<Atom> atoms;
    for (int i = 0; i < 50; ++i)
        atoms.push_back({{0.5 + 1e-4 * counter_double(7, 2 * i), 0.5 + 1e-4 * counter_double(7, 2 * i + 1)}, 1.0});
    atoms.push_back({{0.1, 0.1}, 0.01});
    atoms.push_back({{0.9, 0.9}, 0.01});
    Measure m(std::move(atoms));
    CoronaContext ctx(m);
    DyadicSquare R = ctx.root_square();
    Classification cls =
        classify_square(ctx, box_centered(m.atoms()[0].p, R.side() / 1024.0), R);
    CHECK(cls.kind == SquareClass::high_density);
    CHECK(cls.density_ratio >= ctx.params().threshold_a);
}

TEST_CASE("a sparse neighborhood classifies as low density") {
    // atoms spread so any moderately small square is nearly empty
    Measure m = grid_measure(31);
    CoronaContext ctx(m);
    DyadicSquare R = ctx.root_square();
    const Atom& center = m.atoms()[m.size() / 2];
    Classification cls = classify_square(ctx, box_centered(center.p, R.side() / 64.0), R);
    CHECK(cls.kind == SquareClass::low_density);
    CHECK(cls.sparse_square.has_value());
    // the witness is a genuine concentric enlargement of low density
    CHECK(cls.sparse_theta <= ctx.params().threshold_delta * theta(m, R.box()) * (1 + 1e-12));
    CHECK(cls.sparse_square->side <= R.side() / 8.0 * (1 + 1e-12));
}

TEST_CASE("bad family covers the tripled root and thins by selection") {
    Measure m = cantor4(3);
    CoronaContext ctx(m);
    DyadicSquare R = ctx.root_square();
    BadFamily fam = build_bad(ctx, R);
    REQUIRE(!fam.squares.empty());
    CHECK(fam.candidates_before_selection >= fam.squares.size());
    CHECK(fam.besicovitch_overlap <= 20);
    CHECK(fam.half_overlap <= fam.besicovitch_overlap);
    std::set<std::size_t> centers;
    for (const BadSquare& b : fam.squares) {
        centers.insert(b.center_atom);
        CHECK(b.cls.kind != SquareClass::none);
        // wrap really contains its core square
        CHECK(b.square.box().contains_box(b.core));
        CHECK(b.square.four);
        // half of the wrap still contains the core center
        CHECK(b.square.half().contains(m.atoms()[b.center_atom].p));
    }
    // every atom of 3R is inside some kept square
    Box triple = R.box().scaled(3.0);
    for (const Atom& a : m.atoms()) {
        if (!triple.contains(a.p))
            continue;
        bool covered = false;
        for (const BadSquare& b : fam.squares)
            if (b.square.box().contains(a.p))
                covered = true;
        CHECK(covered);
    }
}

TEST_CASE("decomposition walks deterministically") {
    Measure m = cantor4(3);
    CoronaDecomposition d1 = build_top(m);
    CoronaDecomposition d2 = build_top(m);
    REQUIRE(d1.top.size() == d2.top.size());
    for (std::size_t i = 0; i < d1.top.size(); ++i) {
        CHECK(same_square(d1.top[i].square, d2.top[i].square));
        CHECK(d1.top[i].mass == d2.top[i].mass);
        CHECK(d1.top[i].theta == d2.top[i].theta);
        CHECK(d1.top[i].stop == d2.top[i].stop);
        CHECK(d1.top[i].good_atoms == d2.top[i].good_atoms);
    }
    CHECK(d1.generated_squares == d2.generated_squares);
    CHECK(d1.eliminated_squares == d2.eliminated_squares);
}

TEST_CASE("decomposition structure on a cantor set") {
    Measure m = cantor4(3);
    CoronaContext ctx(m);
    CoronaDecomposition d = build_top(ctx);
    REQUIRE(!d.top.empty());
    CHECK(same_square(d.top[0].square, ctx.root_square()));
    CHECK(d.top[0].mass == doctest::Approx(m.total_mass()).epsilon(1e-12));

    for (const TopEntry& e : d.top) {
        // doubling carried by construction
        Box enlarged = e.square.box().scaled(ctx.params().doubling_top_a);
        CHECK(ctx.box_mass(enlarged) <=
              ctx.params().doubling_top_b * ctx.box_mass(e.square.box()) * (1 + 1e-12));
        CHECK(e.mass == doctest::Approx(ctx.box_mass(e.square.box())).epsilon(1e-12));
        CHECK(e.theta == doctest::Approx(e.mass / e.square.side()).epsilon(1e-12));
        CHECK(e.besicovitch_overlap <= 20);

        for (std::size_t s : e.stop) {
            REQUIRE(s < d.top.size());
            const TopEntry& child = d.top[s];
            // stop squares are small against their parent and meet its triple
            CHECK(child.square.side() <= e.square.side() / 8.0 * (1 + 1e-12));
            Box triple = e.square.box().scaled(3.0);
            Box cb = child.square.box();
            bool meets = triple.x0 < cb.x0 + cb.side && cb.x0 < triple.x0 + triple.side &&
                         triple.y0 < cb.y0 + cb.side && cb.y0 < triple.y0 + triple.side;
            CHECK(meets);
            // maximal: no other stop square of the same parent strictly contains it
            for (std::size_t s2 : e.stop)
                if (s2 != s)
                    CHECK(!(d.top[s2].square.box().contains_box(cb) &&
                            d.top[s2].square.side() > child.square.side()));
        }
        // good atoms are exactly the tripled-square atoms no stop square holds
        CHECK(e.good_atoms == atoms_outside_stops(ctx, e, d));
    }
}

TEST_CASE("packing audit stays finite") {
    for (int g : {2, 3}) {
        Measure m = cantor4(g);
        CoronaDecomposition d = build_top(m);
        PackingAudit audit = packing_audit(m, d);
        CHECK(std::isfinite(audit.lhs));
        CHECK(audit.lhs > 0.0);
        CHECK(audit.rhs_base ==
              doctest::Approx(m.total_mass() + audit.curvature).epsilon(1e-12));
        CHECK(audit.ratio == doctest::Approx(audit.lhs / audit.rhs_base).epsilon(1e-12));
    }
}

TEST_CASE("stopping scale is slowly varying") {
    Measure m = cantor4(3);
    CoronaContext ctx(m);
    CoronaDecomposition d = build_top(ctx);
    const TopEntry& R = d.top[0];
    std::vector<Box> stops;
    for (std::size_t s : R.stop)
        stops.push_back(d.top[s].square.box());
    std::vector<PlanarPoint> good;
    for (std::size_t g : R.good_atoms)
        good.push_back(m.atoms()[g].p);

    Box rb = R.square.box();
    auto sample = [&](std::uint64_t k) {
        return PlanarPoint{rb.x0 + rb.side * counter_double(11, 2 * k),
                           rb.y0 + rb.side * counter_double(11, 2 * k + 1)};
    };
    for (std::uint64_t k = 0; k < 60; ++k) {
        PlanarPoint x = sample(k), y = sample(k + 1000);
        double hx = stopping_scale(x, rb, stops, good);
        double hy = stopping_scale(y, rb, stops, good);
        CHECK(hx >= 0.0);
        // 1/40-Lipschitz in the point
        CHECK(std::fabs(hx - hy) <= dist(x, y) / 40.0 + 1e-12);
    }
    // vanishes exactly at a good atom
    if (!good.empty())
        CHECK(stopping_scale(good[0], rb, stops, good) == 0.0);
}

TEST_CASE("anchor points sit in their stop squares' enlargements") {
    Measure m = cantor4(3);
    CoronaContext ctx(m);
    CoronaDecomposition d = build_top(ctx);
    KSetResult ks = k_set(ctx, d, 0);
    const TopEntry& R = d.top[0];
    REQUIRE(ks.points.size() == R.stop.size());
    REQUIRE(ks.reference_squares.size() == R.stop.size());
    REQUIRE(ks.anchor_distance_ratio.size() == R.stop.size());
    for (std::size_t t = 0; t < ks.points.size(); ++t) {
        Box p3 = d.top[R.stop[t]].square.box().scaled(3.0);
        CHECK(p3.contains(ks.points[t]));
        CHECK(ks.points[t].x == m.atoms()[ks.atom_indices[t]].p.x);
        CHECK(ks.anchor_distance_ratio[t] >= 0.0);
        // reference square either holds the stop square or is the fallback
        if (!ks.ancestor_fallback[t])
            CHECK(ks.reference_squares[t].contains_box(d.top[R.stop[t]].square.box()));
    }
    if (ks.points.size() >= 2)
        CHECK(ks.min_separation_ratio > 0.0);
}

TEST_CASE("allocation spreads masses with the declared density") {
    Polyline curve({{-1, 0.35}, {2, 0.35}});
    std::vector<Box> squares = {{0.1, 0.1, 0.4}, {0.05, 0.0, 0.7}, {0.0, 0.0, 1.0}};
    std::vector<double> masses = {0.2, 0.3, 0.25};
    double bound = 2.0;
    AllocationResult res = allocate_on_curve(masses, squares, curve, bound);
    REQUIRE(res.pieces.size() == 3);
    CHECK(res.mass_error <= 1e-9);
    CHECK(std::isfinite(res.sup_density));
    CHECK(res.sup_density <= 2.0 * bound * (1 + 1e-12));
    CHECK(std::isfinite(res.max_alpha_ratio));
    for (std::size_t i = 0; i < res.pieces.size(); ++i) {
        double len = 0.0;
        for (const ArcInterval& iv : res.pieces[i].support)
            len += iv.length();
        CHECK(res.pieces[i].alpha * len == doctest::Approx(masses[i]).epsilon(1e-9));
        CHECK(!res.pieces[i].fallback);
    }

    // errors
    CHECK_THROWS_AS(allocate_on_curve({0.1}, squares, curve, bound), bad_input);
    CHECK_THROWS_AS(allocate_on_curve({0.1, -0.2, 0.1}, squares, curve, bound), bad_input);
    CHECK_THROWS_AS(allocate_on_curve(masses, squares, curve, 0.0), bad_input);
    std::vector<Box> unsorted = {{0.0, 0.0, 1.0}, {0.1, 0.1, 0.4}, {0.05, 0.0, 0.7}};
    CHECK_THROWS_AS(allocate_on_curve(masses, unsorted, curve, bound), precondition_error);
    // curve misses the first square entirely
    Polyline off({{-1, 5}, {2, 5}});
    CHECK_THROWS_AS(allocate_on_curve(masses, squares, off, bound), precondition_error);
}

TEST_CASE("allocation saturates onto the overflow region") {
    // second square forced above the cap on the shared stretch
    Polyline curve({{0, 0.5}, {1, 0.5}});
    std::vector<Box> squares = {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
    double bound = 0.3;
    // first fill brings density to 0.5 everywhere; cap is 2*0.3 = 0.6, so the
    // second mass of 0.5 cannot fit below the cap and falls back
    AllocationResult res = allocate_on_curve({0.5, 0.5}, squares, curve, bound);
    REQUIRE(res.pieces.size() == 2);
    CHECK(!res.pieces[0].fallback);
    CHECK(res.pieces[1].fallback);
    CHECK(res.sup_density > 2.0 * bound);
}
