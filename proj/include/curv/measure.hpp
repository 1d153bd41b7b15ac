#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "curv/errors.hpp"
#include "curv/ksum.hpp"

namespace curv {

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const PlanarPoint& a, const PlanarPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dist2(const PlanarPoint& a, const PlanarPoint& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Atom {
    PlanarPoint p;
    double w = 0.0;
};

// Axis-aligned square [x0, x0+side) x [y0, y0+side). Half-open on purpose:
// a grid of these tiles the plane without double counting.
struct Box {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 0.0;

    bool contains(const PlanarPoint& p) const {
        return p.x >= x0 && p.x < x0 + side && p.y >= y0 && p.y < y0 + side;
    }
    PlanarPoint center() const { return {x0 + side / 2, y0 + side / 2}; }
    // concentric square with side scaled by t
    Box scaled(double t) const {
        double s = side * t;
        return {x0 + (side - s) / 2, y0 + (side - s) / 2, s};
    }
    bool intersects(const Box& o) const {
        return x0 < o.x0 + o.side && o.x0 < x0 + side &&
               y0 < o.y0 + o.side && o.y0 < y0 + side;
    }
    bool contains_box(const Box& o) const {
        return o.x0 >= x0 && o.x0 + o.side <= x0 + side &&
               o.y0 >= y0 && o.y0 + o.side <= y0 + side;
    }
};

inline Box box_centered(PlanarPoint c, double side) {
    return {c.x - side / 2, c.y - side / 2, side};
}

// distance from p to the closed box (0 if inside)
inline double dist_to_box(const PlanarPoint& p, const Box& b) {
    double dx = std::max({b.x0 - p.x, 0.0, p.x - (b.x0 + b.side)});
    double dy = std::max({b.y0 - p.y, 0.0, p.y - (b.y0 + b.side)});
    return std::hypot(dx, dy);
}

struct GrowthReport {
    double constant = 0.0;
    PlanarPoint witness_center;
    double witness_radius = 0.0;
    double witness_mass = 0.0;
    // atomic measures always diverge as r -> 0; the constant above is the
    // supremum over radii at or above the scan resolution
    bool atom_scale_divergence = true;
    double scan_resolution = 0.0;
};

// Finite atomic measure on the plane. Atom order is part of the value:
// every reduction walks atoms in list order so results are reproducible.
class Measure {
public:
    Measure() = default;
    explicit Measure(std::vector<Atom> atoms, std::string name = "");

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const std::string& name() const { return name_; }

    // structure-of-arrays views for the hot kernels
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return ys_.data(); }
    const double* ws() const { return ws_.data(); }

    double total_mass() const;
    double ball_mass(PlanarPoint center, double r) const;
    double box_mass(const Box& q) const;

    // smallest nonzero pairwise atom distance; +inf when none exists
    double resolution() const;

    // true when all atoms lie on one line (exact test)
    bool collinear() const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> xs_, ys_, ws_;
    std::string name_;
    mutable std::optional<double> resolution_;
    mutable std::optional<bool> collinear_;
};

double theta(const Measure& m, const Box& q);
double delta(const Measure& m, const Box& q, const Box& r);

// Scans every atom center against every nonzero atom-to-atom distance at or
// above min_radius and reports the largest ball_mass/r ratio seen. For atom
// centers this scan attains the true supremum over all radii >= min_radius.
GrowthReport growth_constant(const Measure& m, double min_radius = 0.0);

} // namespace curv
