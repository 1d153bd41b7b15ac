#include <doctest.h>

#include <cmath>

#include "curv/capacity.hpp"
#include "curv/curvature.hpp"
#include "curv/generators.hpp"
#include "test_helpers.hpp"

using namespace curv;

namespace {

std::vector<PlanarPoint> support_of(const Measure& m) {
    std::vector<PlanarPoint> pts;
    for (const Atom& a : m.atoms())
        pts.push_back(a.p);
    return pts;
}

} // namespace

TEST_CASE("degenerate supports") {
    CapacityEstimate one = estimate_gamma({{3, 4}});
    CHECK(one.value == 0.0);
    CHECK(one.report.feasible);

    CapacityEstimate same = estimate_gamma({{1, 1}, {1, 1}, {1, 1}});
    CHECK(same.value == 0.0);

    CHECK_THROWS_AS(estimate_gamma({}), bad_input);
}

TEST_CASE("witness passes its own audit") {
    for (std::uint64_t seed : {81ull, 82ull}) {
        std::vector<PlanarPoint> pts;
        for (const PlanarPoint& p : testutil::random_points(40, seed))
            pts.push_back(p);
        CapacityEstimate est = estimate_gamma(pts);
        CHECK(est.value > 0.0);
        CHECK(est.report.feasible);
        CHECK(est.report.growth_ratio <= 1.0 + 1e-9);
        CHECK(est.report.curvature_ratio <= 1.0 + 1e-9);
        CHECK(est.witness.total_mass() == doctest::Approx(est.value).epsilon(1e-12));
        FeasibilityReport audit =
            verify_feasibility(est.witness, est.report.resolution);
        CHECK(audit.feasible);
    }
}

TEST_CASE("collinear support never trips the curvature constraint") {
    Measure seg = segment_measure(30);
    CapacityEstimate est = estimate_gamma(support_of(seg));
    CHECK(est.value > 0.0);
    CHECK(est.report.curvature_ratio == 0.0);
    CHECK(c2_total(est.witness, 0.0).value == 0.0);
}

TEST_CASE("estimate scales linearly under dilation") {
    std::vector<PlanarPoint> pts = testutil::random_points(30, 83);
    CapacityParams p;
    p.seed = 4;
    double base = estimate_gamma(pts, p).value;
    for (double t : {3.0, 0.5}) {
        std::vector<PlanarPoint> scaled;
        for (const PlanarPoint& q : pts)
            scaled.push_back({t * q.x, t * q.y});
        CapacityParams ps = p;
        ps.resolution = 0; // rescales with the support on its own
        double got = estimate_gamma(scaled, ps).value;
        CHECK(got == doctest::Approx(t * base).epsilon(1e-9));
    }
}

TEST_CASE("estimate is isometry invariant") {
    std::vector<PlanarPoint> pts = testutil::random_points(30, 84);
    CapacityParams p;
    p.seed = 9;
    double base = estimate_gamma(pts, p).value;
    double c = std::cos(1.1), s = std::sin(1.1);
    std::vector<PlanarPoint> moved;
    for (const PlanarPoint& q : pts)
        moved.push_back({c * q.x - s * q.y + 10, s * q.x + c * q.y - 4});
    CHECK(estimate_gamma(moved, p).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("looser growth slope never shrinks the alpha estimate") {
    std::vector<PlanarPoint> pts = testutil::random_points(25, 85);
    CapacityParams tight;
    tight.eta = 0.5;
    CapacityParams loose;
    loose.eta = 2.0;
    double lo = estimate_alpha(pts, tight).value;
    double hi = estimate_alpha(pts, loose).value;
    CHECK(lo <= hi * (1 + 1e-12));
    CHECK(estimate_alpha(pts, CapacityParams{}).value ==
          doctest::Approx(estimate_gamma(pts).value).epsilon(1e-12));
}

TEST_CASE("feasibility audit flags violations") {
    // one heavy atom pair close together: growth cap breaks at small radii
    Measure heavy({{{0, 0}, 5.0}, {{0.1, 0}, 5.0}});
    FeasibilityReport rep = verify_feasibility(heavy, 0.1);
    CHECK(rep.growth_ratio > 1.0);
    CHECK(!rep.feasible);

    Measure tiny({{{0, 0}, 0.001}, {{1, 0}, 0.001}});
    CHECK(verify_feasibility(tiny, 1.0).feasible);
}
