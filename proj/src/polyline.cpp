#include "curv/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curv/errors.hpp"
#include "curv/menger.hpp"
#include "curv/rng.hpp"

namespace curv {

Polyline::Polyline(std::vector<PlanarPoint> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 2) throw bad_input("polyline needs at least 2 vertices");
    for (const auto& v : verts_) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw bad_input("polyline vertex is not finite");
    }
    cum_.resize(verts_.size());
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < verts_.size(); ++i)
        cum_[i] = cum_[i - 1] + dist(verts_[i - 1], verts_[i]);
    if (cum_.back() <= 0.0) throw bad_input("polyline has zero length");
}

PlanarPoint Polyline::point_at(double s) const {
    if (s <= 0.0) return verts_.front();
    if (s >= length()) return verts_.back();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    // cum_[i-1] <= s < cum_[i]; skip degenerate segments
    while (i < cum_.size() && cum_[i] == cum_[i - 1]) ++i;
    if (i >= cum_.size()) return verts_.back();
    double t = (s - cum_[i - 1]) / (cum_[i] - cum_[i - 1]);
    return {verts_[i - 1].x + t * (verts_[i].x - verts_[i - 1].x),
            verts_[i - 1].y + t * (verts_[i].y - verts_[i - 1].y)};
}

namespace {

// parameter range of p0 + t*(p1-p0), t in [0,1], inside the closed box
bool clip_segment_box(PlanarPoint p0, PlanarPoint p1, const Box& b, double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const double dx = p1.x - p0.x;
    const double dy = p1.y - p0.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {p0.x - b.x0, b.x0 + b.side - p0.x, p0.y - b.y0, b.y0 + b.side - p0.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return false;
        } else {
            double r = q[k] / p[k];
            if (p[k] < 0.0) {
                if (r > t1) return false;
                if (r > t0) t0 = r;
            } else {
                if (r < t0) return false;
                if (r < t1) t1 = r;
            }
        }
    }
    return t1 >= t0;
}

std::vector<ArcInterval> merge_intervals(std::vector<ArcInterval> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const ArcInterval& a, const ArcInterval& b) {
                  return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
              });
    std::vector<ArcInterval> out;
    for (const auto& iv : raw) {
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

} // namespace

std::vector<ArcInterval> Polyline::clip_to_box(const Box& b) const {
    std::vector<ArcInterval> raw;
    for (std::size_t i = 1; i < verts_.size(); ++i) {
        double len = cum_[i] - cum_[i - 1];
        if (len <= 0.0) continue;
        double t0, t1;
        if (!clip_segment_box(verts_[i - 1], verts_[i], b, t0, t1)) continue;
        raw.push_back({cum_[i - 1] + t0 * len, cum_[i - 1] + t1 * len});
    }
    return merge_intervals(raw);
}

double Polyline::length_in_ball(PlanarPoint center, double r) const {
    if (r < 0.0) return 0.0;
    double total = 0.0;
    const double r2 = r * r;
    for (std::size_t i = 1; i < verts_.size(); ++i) {
        double len = cum_[i] - cum_[i - 1];
        if (len <= 0.0) continue;
        const double dx = verts_[i].x - verts_[i - 1].x;
        const double dy = verts_[i].y - verts_[i - 1].y;
        const double ex = verts_[i - 1].x - center.x;
        const double ey = verts_[i - 1].y - center.y;
        const double a = dx * dx + dy * dy;
        // foot of the perpendicular plus chord half-width; the textbook
        // quadratic cancels catastrophically when the chord is short, this
        // form keeps every term at the chord's own scale
        const double tf = -(dx * ex + dy * ey) / a;
        const double cr = cross2(dx, dy, ex, ey);
        double disc = r2 * a - cr * cr;
        if (disc < 0.0) continue;
        double ht = std::sqrt(disc) / a;
        double t0 = std::max(tf - ht, 0.0);
        double t1 = std::min(tf + ht, 1.0);
        if (t1 > t0) total += (t1 - t0) * len;
    }
    return total;
}

AdRegularityReport ad_regularity(const Polyline& curve, int samples, std::uint64_t seed) {
    const auto& vs = curve.vertices();
    std::vector<PlanarPoint> centers = vs;
    for (int t = 0; t < samples; ++t)
        centers.push_back(curve.point_at(counter_double(seed, static_cast<std::uint64_t>(t)) * curve.length()));

    AdRegularityReport rep;
    for (const auto& c : centers) {
        // critical radii: the length-vs-radius profile has kinks exactly at
        // distances to vertices and perpendicular feet
        std::vector<double> radii;
        radii.reserve(2 * vs.size());
        for (const auto& v : vs) radii.push_back(dist(c, v));
        for (std::size_t i = 1; i < vs.size(); ++i) {
            const double dx = vs[i].x - vs[i - 1].x;
            const double dy = vs[i].y - vs[i - 1].y;
            const double a = dx * dx + dy * dy;
            if (a <= 0.0) continue;
            double t = ((c.x - vs[i - 1].x) * dx + (c.y - vs[i - 1].y) * dy) / a;
            if (t <= 0.0 || t >= 1.0) continue;
            PlanarPoint foot{vs[i - 1].x + t * dx, vs[i - 1].y + t * dy};
            radii.push_back(dist(c, foot));
        }
        std::sort(radii.begin(), radii.end());
        for (double r : radii) {
            if (r <= 0.0) continue;
            double len = curve.length_in_ball(c, r);
            double ratio = len / r;
            if (ratio > rep.constant) {
                rep.constant = ratio;
                rep.witness_center = c;
                rep.witness_radius = r;
                rep.witness_length = len;
            }
        }
    }
    return rep;
}

} // namespace curv
