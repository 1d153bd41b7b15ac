#include "curv/reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "curv/errors.hpp"

namespace curvref {

using curv::Atom;
using curv::Measure;
using curv::PlanarPoint;

double menger_via_circumradius(PlanarPoint a, PlanarPoint b, PlanarPoint c) {
    // circumcenter p solves 2(b-a).p = |b|^2-|a|^2 and 2(c-a).p = |c|^2-|a|^2
    long double abx = b.x - a.x, aby = b.y - a.y;
    long double acx = c.x - a.x, acy = c.y - a.y;
    long double det = 2.0L * (abx * acy - aby * acx);
    if (det == 0.0L)
        return 0.0;
    long double rb = abx * (a.x + b.x) + aby * (a.y + b.y);
    long double rc = acx * (a.x + c.x) + acy * (a.y + c.y);
    long double px = (rb * acy - aby * rc) / det;
    long double py = (abx * rc - rb * acx) / det;
    long double dx = px - a.x, dy = py - a.y;
    long double r = std::sqrt((double)(dx * dx + dy * dy));
    if (!(r > 0.0L) || !std::isfinite((double)r))
        return 0.0;
    return (double)(1.0L / r);
}

namespace {

bool admissible(const Measure& m, std::size_t i, std::size_t j, double eps) {
    return curv::dist2(m.atoms()[i].p, m.atoms()[j].p) > eps * eps;
}

} // namespace

double c2_direct(const Measure& m, double eps) {
    std::size_t n = m.size();
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k)
                    continue;
                if (!admissible(m, i, j, eps) || !admissible(m, j, k, eps) ||
                    !admissible(m, i, k, eps))
                    continue;
                double cr = menger_via_circumradius(m.atoms()[i].p, m.atoms()[j].p,
                                                    m.atoms()[k].p);
                acc += (long double)(cr * cr) * m.atoms()[i].w * m.atoms()[j].w *
                       m.atoms()[k].w;
            }
    return (double)acc;
}

long long c2_triples_direct(const Measure& m, double eps) {
    std::size_t n = m.size();
    long long count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k)
                    continue;
                if (admissible(m, i, j, eps) && admissible(m, j, k, eps) &&
                    admissible(m, i, k, eps))
                    ++count;
            }
    return count;
}

double c2_point_direct(const Measure& m, std::size_t index, double eps) {
    std::size_t n = m.size();
    if (index >= n)
        throw curv::bad_input("c2_point_direct: index out of range");
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            if (j == index || k == index || j == k)
                continue;
            if (!admissible(m, index, j, eps) || !admissible(m, index, k, eps) ||
                !admissible(m, j, k, eps))
                continue;
            double cr =
                menger_via_circumradius(m.atoms()[index].p, m.atoms()[j].p, m.atoms()[k].p);
            acc += (long double)(cr * cr) * m.atoms()[j].w * m.atoms()[k].w;
        }
    return (double)acc;
}

double c2_restricted_direct(const Measure& m, const std::vector<std::size_t>& A,
                            const std::vector<std::size_t>& B,
                            const std::vector<std::size_t>& C) {
    long double acc = 0.0L;
    for (std::size_t a : A)
        for (std::size_t b : B)
            for (std::size_t c : C) {
                if (a >= m.size() || b >= m.size() || c >= m.size())
                    throw curv::bad_input("c2_restricted_direct: index out of range");
                double cr =
                    menger_via_circumradius(m.atoms()[a].p, m.atoms()[b].p, m.atoms()[c].p);
                acc += (long double)(cr * cr) * m.atoms()[a].w * m.atoms()[b].w *
                       m.atoms()[c].w;
            }
    return (double)acc;
}

MvDirect mv_direct(const Measure& m, double eps) {
    std::size_t n = m.size();
    MvDirect out;
    long double lhs = 0.0L, diag = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<long double> s{0.0L, 0.0L};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !admissible(m, j, i, eps))
                continue;
            std::complex<long double> dz{m.atoms()[j].p.x - m.atoms()[i].p.x,
                                         m.atoms()[j].p.y - m.atoms()[i].p.y};
            s += (long double)m.atoms()[j].w / dz;
            diag += (long double)m.atoms()[i].w * m.atoms()[j].w * m.atoms()[j].w /
                    (long double)curv::dist2(m.atoms()[i].p, m.atoms()[j].p);
        }
        lhs += (long double)m.atoms()[i].w * std::norm(s);
    }
    out.lhs = (double)lhs;
    out.diagonal_term = (double)diag;
    out.curvature_term = c2_direct(m, eps) / 6.0;
    return out;
}

double strip_width_direct(const std::vector<PlanarPoint>& pts, int sampled_directions) {
    if (pts.size() < 2)
        return 0.0;
    std::vector<double> angles;
    constexpr double pi = 3.14159265358979323846;
    for (int t = 0; t < sampled_directions; ++t)
        angles.push_back(pi * t / sampled_directions);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double dx = pts[j].x - pts[i].x, dy = pts[j].y - pts[i].y;
            if (dx != 0.0 || dy != 0.0)
                angles.push_back(std::atan2(dy, dx));
        }
    double best = std::numeric_limits<double>::infinity();
    for (double a : angles) {
        double nx = -std::sin(a), ny = std::cos(a);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const PlanarPoint& p : pts) {
            double v = nx * p.x + ny * p.y;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        best = std::min(best, hi - lo);
    }
    return best;
}

double growth_direct(const Measure& m, double min_radius) {
    std::size_t n = m.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> radii;
        if (min_radius > 0.0)
            radii.push_back(min_radius);
        for (std::size_t j = 0; j < n; ++j) {
            double d = curv::dist(m.atoms()[i].p, m.atoms()[j].p);
            if (d > 0.0 && d >= min_radius)
                radii.push_back(d);
        }
        for (double r : radii) {
            long double mass = 0.0L;
            for (std::size_t j = 0; j < n; ++j)
                if (curv::dist(m.atoms()[i].p, m.atoms()[j].p) <= r)
                    mass += m.atoms()[j].w;
            best = std::max(best, (double)(mass / r));
        }
    }
    return best;
}

double kernel_row_direct(const Measure& m, std::size_t i, double r) {
    std::size_t n = m.size();
    if (i >= n)
        throw curv::bad_input("kernel_row_direct: index out of range");
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        if (curv::dist(m.atoms()[i].p, m.atoms()[j].p) <= r)
            continue;
        long double kv = 0.0L;
        for (std::size_t z = 0; z < n; ++z) {
            double cr = menger_via_circumradius(m.atoms()[i].p, m.atoms()[j].p, m.atoms()[z].p);
            kv += (long double)(cr * cr) * m.atoms()[z].w;
        }
        acc += kv * m.atoms()[j].w;
    }
    return (double)acc;
}

std::vector<double> k_operator_direct(const Measure& m, int j, const std::vector<double>& f) {
    std::size_t n = m.size();
    if (f.size() != n)
        throw curv::bad_input("k_operator_direct: vector length does not match atom count");
    double r = std::ldexp(1.0, -j);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        long double acc = 0.0L;
        for (std::size_t p = 0; p < n; ++p) {
            if (curv::dist(m.atoms()[i].p, m.atoms()[p].p) <= r)
                continue;
            long double kv = 0.0L;
            for (std::size_t z = 0; z < n; ++z) {
                double cr =
                    menger_via_circumradius(m.atoms()[i].p, m.atoms()[p].p, m.atoms()[z].p);
                kv += (long double)(cr * cr) * m.atoms()[z].w;
            }
            acc += kv * f[p] * m.atoms()[p].w;
        }
        out[i] = (double)acc;
    }
    return out;
}

} // namespace curvref
