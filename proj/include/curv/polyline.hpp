#pragma once

#include <cstdint>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

// Interval of arc-length parameters along a polyline.
struct ArcInterval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// Piecewise-linear curve with arc-length parametrization.
class Polyline {
public:
    explicit Polyline(std::vector<PlanarPoint> vertices);

    const std::vector<PlanarPoint>& vertices() const { return verts_; }
    double length() const { return cum_.back(); }
    PlanarPoint point_at(double s) const;

    // arc intervals lying inside the closed square; merged and sorted
    std::vector<ArcInterval> clip_to_box(const Box& b) const;
    // exact arc length inside the closed ball B(center, r)
    double length_in_ball(PlanarPoint center, double r) const;

    // cumulative arc length at each vertex
    const std::vector<double>& cumlen() const { return cum_; }

private:
    std::vector<PlanarPoint> verts_;
    std::vector<double> cum_;
};

struct AdRegularityReport {
    double constant = 0.0;
    PlanarPoint witness_center;
    double witness_radius = 0.0;
    double witness_length = 0.0;
};

// sup over sampled curve points x and critical radii r of
// (arc length of the curve inside B(x,r)) / r. Radii scan the distances
// from x to every vertex and every perpendicular foot, where the ratio's
// local maxima live.
AdRegularityReport ad_regularity(const Polyline& curve, int samples, std::uint64_t seed);

} // namespace curv
