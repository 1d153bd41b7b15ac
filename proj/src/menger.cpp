#include "curv/menger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curv {

double cross2(double ux, double uy, double vx, double vy) {
    // Kahan's determinant trick: fma recovers the rounding error of the
    // first product, which matters for nearly collinear triples
    double w = uy * vx;
    double e = std::fma(uy, vx, -w);
    double f = std::fma(ux, vy, -w);
    return f - e;
}

static bool point_less(const PlanarPoint& a, const PlanarPoint& b) {
    if (a.x != b.x)
        return a.x < b.x;
    return a.y < b.y;
}

double menger_curvature_sq(PlanarPoint x, PlanarPoint y, PlanarPoint z) {
    PlanarPoint p[3] = {x, y, z};
    std::sort(p, p + 3, point_less);
    double ux = p[1].x - p[0].x, uy = p[1].y - p[0].y;
    double vx = p[2].x - p[0].x, vy = p[2].y - p[0].y;
    double wx = p[2].x - p[1].x, wy = p[2].y - p[1].y;
    double a2 = ux * ux + uy * uy;
    double b2 = vx * vx + vy * vy;
    double c2 = wx * wx + wy * wy;
    double den = a2 * b2 * c2;
    if (den < 1e-300)
        return 0.0;
    double cr = cross2(ux, uy, vx, vy);
    return 4.0 * (cr * cr) / den;
}

double menger_curvature(PlanarPoint x, PlanarPoint y, PlanarPoint z) {
    return std::sqrt(menger_curvature_sq(x, y, z));
}

Strip min_width_strip(const std::vector<PlanarPoint>& points) {
    if (points.empty())
        throw bad_input("min_width_strip: empty point list");
    // convex hull (monotone chain)
    std::vector<PlanarPoint> pts = points;
    std::sort(pts.begin(), pts.end(), point_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const PlanarPoint& a, const PlanarPoint& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    auto cross_pts = [](const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
        return cross2(a.x - o.x, a.y - o.y, b.x - o.x, b.y - o.y);
    };
    std::vector<PlanarPoint> hull;
    if (pts.size() >= 3) {
        std::vector<PlanarPoint> h(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cross_pts(h[k - 2], h[k - 1], pts[i]) <= 0.0)
                --k;
            h[k++] = pts[i];
        }
        std::size_t lower = k + 1;
        for (std::size_t i = pts.size() - 1; i-- > 0;) {
            while (k >= lower && cross_pts(h[k - 2], h[k - 1], pts[i]) <= 0.0)
                --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        hull = std::move(h);
    } else {
        hull = pts;
    }

    if (hull.size() <= 1) {
        Strip s;
        if (!hull.empty())
            s.lo = s.hi = hull[0].y;
        return s;
    }
    if (hull.size() == 2) {
        // collinear set: strip axis along the segment
        double dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
        double n = std::hypot(dx, dy);
        Strip s;
        s.dir_x = dx / n;
        s.dir_y = dy / n;
        s.lo = std::numeric_limits<double>::infinity();
        s.hi = -s.lo;
        for (const PlanarPoint& p : pts) {
            double proj = -s.dir_y * p.x + s.dir_x * p.y;
            s.lo = std::min(s.lo, proj);
            s.hi = std::max(s.hi, proj);
        }
        return s;
    }

    // the optimal strip is flush with some hull edge: try each edge
    // direction and take the projection spread onto its normal
    Strip best;
    double best_w = std::numeric_limits<double>::infinity();
    std::size_t hn = hull.size();
    for (std::size_t e = 0; e < hn; ++e) {
        double dx = hull[(e + 1) % hn].x - hull[e].x;
        double dy = hull[(e + 1) % hn].y - hull[e].y;
        double n = std::hypot(dx, dy);
        if (n == 0.0)
            continue;
        double ux = dx / n, uy = dy / n;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const PlanarPoint& p : hull) {
            double proj = -uy * p.x + ux * p.y; // onto the left normal
            lo = std::min(lo, proj);
            hi = std::max(hi, proj);
        }
        if (hi - lo < best_w) {
            best_w = hi - lo;
            best.dir_x = ux;
            best.dir_y = uy;
            best.lo = lo;
            best.hi = hi;
        }
    }
    return best;
}

PerturbationOutcome curvature_perturbation_check(PlanarPoint x, PlanarPoint x_prime,
                                                 PlanarPoint y, PlanarPoint z, double c6) {
    if (!(c6 >= 1.0))
        throw bad_input("curvature_perturbation_check: comparability constant must be >= 1");
    double dxy = dist(x, y);
    double dxpy = dist(x_prime, y);
    if (!(dxpy >= dxy / c6 && dxpy <= dxy * c6))
        return PerturbationOutcome::inapplicable;
    double dxz = dist(x, z);
    if (dxy == 0.0 || dxz == 0.0)
        return PerturbationOutcome::inapplicable;
    double lhs = std::fabs(menger_curvature(x, y, z) - menger_curvature(x_prime, y, z));
    double rhs = (4.0 + 2.0 * c6) * dist(x, x_prime) / (dxy * dxz);
    return lhs <= rhs ? PerturbationOutcome::holds : PerturbationOutcome::fails;
}

} // namespace curv
