#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>

#include "curv/curvature.hpp"
#include "curv/generators.hpp"
#include "curv/reference.hpp"
#include "test_helpers.hpp"

using namespace curv;

TEST_CASE("total curvature matches the direct triple sum") {
    for (std::uint64_t seed : {31ull, 32ull}) {
        Measure m = testutil::random_measure(35, seed);
        for (double eps : {0.0, 0.05, 0.3}) {
            CurvatureResult r = c2_total(m, eps);
            CHECK(r.value == doctest::Approx(curvref::c2_direct(m, eps)).epsilon(1e-12));
            CHECK(r.triple_count == curvref::c2_triples_direct(m, eps));
        }
    }
    Measure c = cantor4(2);
    CHECK(c2_total(c, 0.0).value ==
          doctest::Approx(curvref::c2_direct(c, 0.0)).epsilon(1e-12));
}

TEST_CASE("total curvature ignores the input order") {
    Measure m = testutil::random_measure(40, 33);
    std::vector<Atom> shuffled = m.atoms();
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[counter_u64(9, i) % i]);
    Measure m2(std::move(shuffled));
    CHECK(c2_total(m, 0.01).value == c2_total(m2, 0.01).value);
    CHECK(c2_total(m, 0.0).triple_count == c2_total(m2, 0.0).triple_count);
}

TEST_CASE("pointwise curvature sums back to the total") {
    Measure m = testutil::random_measure(25, 34);
    double eps = 0.02;
    KahanSum acc;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double ci = c2_point(m, i, eps);
        CHECK(ci == doctest::Approx(curvref::c2_point_direct(m, i, eps)).epsilon(1e-12));
        acc.add(m.atoms()[i].w * ci);
    }
    CHECK(acc.value() == doctest::Approx(c2_total(m, eps).value).epsilon(1e-12));
}

TEST_CASE("restricted curvature over index families") {
    Measure m = testutil::random_measure(20, 35);
    std::vector<std::size_t> A = {0, 1, 2, 3, 4}, B = {3, 4, 5, 6}, C = {0, 7, 8, 9};
    double got = c2_restricted(m, A, B, C, 0.0);
    CHECK(got == doctest::Approx(curvref::c2_restricted_direct(m, A, B, C)).epsilon(1e-12));
    // kernel symmetry carries over to swapped families
    CHECK(c2_restricted(m, B, A, C, 0.0) == doctest::Approx(got).epsilon(1e-12));
    // repeated indices only ever hit degenerate triples
    std::vector<std::size_t> one = {5};
    CHECK(c2_restricted(m, one, one, one, 0.0) == 0.0);
    CHECK(c2_restricted(m, one, one, C, 0.0) == 0.0);
}

TEST_CASE("curvature transforms covariantly") {
    Measure m = testutil::random_measure(30, 36);
    double base = c2_total(m, 0.0).value;

    for (double t : {3.0, 0.25}) {
        std::vector<Atom> scaled;
        for (const Atom& a : m.atoms())
            scaled.push_back({{t * a.p.x, t * a.p.y}, a.w});
        CHECK(c2_total(Measure(std::move(scaled)), 0.0).value ==
              doctest::Approx(base / (t * t)).epsilon(1e-12));
    }

    double s = 1.7;
    std::vector<Atom> heavier;
    for (const Atom& a : m.atoms())
        heavier.push_back({a.p, s * a.w});
    CHECK(c2_total(Measure(std::move(heavier)), 0.0).value ==
          doctest::Approx(base * s * s * s).epsilon(1e-12));

    double co = std::cos(0.77), si = std::sin(0.77);
    std::vector<Atom> moved;
    for (const Atom& a : m.atoms())
        moved.push_back({{co * a.p.x - si * a.p.y + 5.0, si * a.p.x + co * a.p.y - 2.0}, a.w});
    CHECK(c2_total(Measure(std::move(moved)), 0.0).value ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("truncated kernel operator matches the direct sum") {
    Measure m = testutil::random_measure(22, 37);
    std::vector<double> f(m.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = counter_double(38, i) * 2.0 - 1.0;
    for (int j : {-2, 0, 3, 8}) {
        std::vector<double> got = k_operator(m, j, f);
        std::vector<double> want = curvref::k_operator_direct(m, j, f);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));
    }
}

TEST_CASE("cauchy transform against a long double sum") {
    Measure m = testutil::random_measure(40, 39);
    PlanarPoint z{-0.3, 1.4};
    std::complex<long double> acc = 0.0L;
    for (const Atom& a : m.atoms())
        acc += (long double)a.w /
               std::complex<long double>(a.p.x - z.x, a.p.y - z.y);
    std::complex<double> got = cauchy_transform(m, z, 0.0);
    CHECK(got.real() == doctest::Approx((double)acc.real()).epsilon(1e-13));
    CHECK(got.imag() == doctest::Approx((double)acc.imag()).epsilon(1e-13));
    // truncation drops every atom within range
    std::complex<double> far = cauchy_transform(m, z, 100.0);
    CHECK(far.real() == 0.0);
    CHECK(far.imag() == 0.0);
}

TEST_CASE("identity on the worked three point example") {
    // atoms 0, 1, i with unit weights: lhs 7, curvature part 2, pair part 5
    Measure m({{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
    MVIdentityReport rep = mv_identity_report(m, 1e-6);
    CHECK(rep.lhs == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(rep.curvature_term == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.diagonal_term == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::fabs(rep.residual) < 1e-12);
}

TEST_CASE("identity residual vanishes on random measures") {
    for (std::uint64_t seed : {41ull, 42ull, 43ull}) {
        Measure m = testutil::random_measure(80, seed);
        double eps = 0.25 * m.resolution();
        MVIdentityReport rep = mv_identity_report(m, eps);
        CHECK(std::fabs(rep.residual) <= 1e-9 * std::max(std::fabs(rep.lhs), 1.0));
        curvref::MvDirect ref = curvref::mv_direct(m, eps);
        CHECK(rep.lhs == doctest::Approx(ref.lhs).epsilon(1e-10));
        CHECK(rep.diagonal_term == doctest::Approx(ref.diagonal_term).epsilon(1e-10));
    }
}

TEST_CASE("identity preconditions") {
    Measure dup({{{0, 0}, 1.0}, {{0, 0}, 1.0}, {{1, 0}, 1.0}});
    CHECK_THROWS_AS(mv_identity_report(dup, 0.0), precondition_error);
    CHECK_THROWS_AS(mv_identity_report(dup, 1e-12), precondition_error);

    Measure m({{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
    CHECK_THROWS_AS(mv_identity_report(m, 1.0), precondition_error);
    CHECK_THROWS_AS(mv_identity_report(m, 2.0), precondition_error);
    CHECK_THROWS_AS(mv_identity_report(m, -1.0), bad_input);
}

TEST_CASE("monte carlo curvature lands near the exact value") {
    Measure m = testutil::random_measure(50, 44);
    double exact = c2_total(m, 0.0).value;
    CurvatureResult mc = c2_monte_carlo(m, 0.0, 400000, 7);
    CHECK(std::fabs(mc.value - exact) <= 5.0 * mc.stderr_est + 1e-9);
    CHECK(mc.stderr_est > 0.0);
    // same seed, same bits
    CHECK(c2_monte_carlo(m, 0.0, 400000, 7).value == mc.value);
    CHECK(c2_monte_carlo(m, 0.0, 400000, 8).value != mc.value);
}

TEST_CASE("kernel cache rows match the direct scan") {
    Measure m = testutil::random_measure(28, 45);
    KernelCache kc(m);
    REQUIRE(kc.size() == m.size());
    CHECK(!kc.kernel_identically_zero());
    for (std::size_t i : {(std::size_t)0, (std::size_t)13, m.size() - 1}) {
        for (double r : {0.0, 0.05, 0.2, 0.7, 5.0}) {
            CHECK(kc.truncated_row_sum(i, r) ==
                  doctest::Approx(curvref::kernel_row_direct(m, i, r)).epsilon(1e-11));
        }
    }

    Measure line({{{0, 0}, 1.0}, {{0.3, 0.3}, 2.0}, {{0.9, 0.9}, 1.0}, {{2, 2}, 1.0}});
    KernelCache flat(line);
    CHECK(flat.kernel_identically_zero());
    CHECK(flat.truncated_row_sum(0, 0.0) == 0.0);
}

TEST_CASE("operator norm estimate agrees with a dense decomposition") {
    for (std::uint64_t seed : {46ull, 47ull}) {
        Measure m = testutil::random_measure(30, seed);
        double eps = 0.05;
        OpNormReport rep = operator_norm_estimate(m, eps, 400, 5);

        std::size_t n = m.size();
        const double* xs = m.xs();
        const double* ys = m.ys();
        const double* ws = m.ws();
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
                double d2 = dx * dx + dy * dy;
                if (!(d2 > eps * eps))
                    continue;
                M((Eigen::Index)i, (Eigen::Index)j) =
                    std::sqrt(ws[i]) * std::sqrt(ws[j]) *
                    std::complex<double>(dx / d2, -dy / d2);
            }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        double top = svd.singularValues()(0);
        CHECK(std::fabs(rep.value - top) <= 1e-6 * std::max(top, 1.0));
    }
}
