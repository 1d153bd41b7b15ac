#include "curv/measure.hpp"

#include <algorithm>

#include "curv/menger.hpp"

namespace curv {

Measure::Measure(std::vector<Atom> atoms, std::string name)
    : atoms_(std::move(atoms)), name_(std::move(name)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.w > 0.0) || !std::isfinite(a.w))
            throw bad_input("atom " + std::to_string(i) + ": weight must be positive and finite");
        if (!std::isfinite(a.p.x) || !std::isfinite(a.p.y))
            throw bad_input("atom " + std::to_string(i) + ": non-finite coordinate");
    }
    xs_.reserve(atoms_.size());
    ys_.reserve(atoms_.size());
    ws_.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
        xs_.push_back(a.p.x);
        ys_.push_back(a.p.y);
        ws_.push_back(a.w);
    }
}

double Measure::total_mass() const {
    KahanSum s;
    for (const Atom& a : atoms_)
        s.add(a.w);
    return s.value();
}

double Measure::ball_mass(PlanarPoint center, double r) const {
    if (r < 0.0)
        throw bad_input("ball_mass: negative radius");
    KahanSum s;
    // compare via dist, not squared distances, so radii taken from measured
    // atom distances land exactly on the boundary
    for (const Atom& a : atoms_)
        if (dist(a.p, center) <= r)
            s.add(a.w);
    return s.value();
}

double Measure::box_mass(const Box& q) const {
    KahanSum s;
    for (const Atom& a : atoms_)
        if (q.contains(a.p))
            s.add(a.w);
    return s.value();
}

double Measure::resolution() const {
    if (resolution_)
        return *resolution_;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
            double d2 = dist2(atoms_[i].p, atoms_[j].p);
            if (d2 > 0.0 && d2 < best)
                best = d2;
        }
    resolution_ = std::isfinite(best) ? std::sqrt(best) : best;
    return *resolution_;
}

bool Measure::collinear() const {
    if (collinear_)
        return *collinear_;
    bool result = true;
    std::size_t base = 0, second = atoms_.size();
    for (std::size_t i = 1; i < atoms_.size(); ++i) {
        if (atoms_[i].p.x != atoms_[base].p.x || atoms_[i].p.y != atoms_[base].p.y) {
            second = i;
            break;
        }
    }
    if (second < atoms_.size()) {
        double ux = atoms_[second].p.x - atoms_[base].p.x;
        double uy = atoms_[second].p.y - atoms_[base].p.y;
        for (std::size_t i = second + 1; i < atoms_.size(); ++i) {
            double vx = atoms_[i].p.x - atoms_[base].p.x;
            double vy = atoms_[i].p.y - atoms_[base].p.y;
            // exact determinant; the naive product difference is not reliable
            // here because the compiler may contract it into an fma, which
            // turns an exact zero into its rounding residual
            if (cross2(ux, uy, vx, vy) != 0.0) {
                result = false;
                break;
            }
        }
    }
    collinear_ = result;
    return result;
}

double theta(const Measure& m, const Box& q) {
    if (!(q.side > 0.0))
        throw bad_input("theta: square side must be positive");
    return m.box_mass(q) / q.side;
}

double delta(const Measure& m, const Box& q, const Box& r) {
    if (!r.contains_box(q))
        throw precondition_error("delta: first square must be contained in the second");
    PlanarPoint c = q.center();
    double half = std::max(std::max(c.x - r.x0, r.x0 + r.side - c.x),
                           std::max(c.y - r.y0, r.y0 + r.side - c.y));
    Box rq = box_centered(c, 2.0 * half);
    KahanSum s;
    for (const Atom& a : m.atoms())
        if (rq.contains(a.p) && !q.contains(a.p))
            s.add(a.w / dist(a.p, c));
    return s.value();
}

GrowthReport growth_constant(const Measure& m, double min_radius) {
    if (m.empty())
        throw bad_input("growth_constant: empty measure");
    GrowthReport rep;
    rep.scan_resolution = std::max(min_radius, 0.0);
    std::size_t n = m.size();
    const std::vector<Atom>& atoms = m.atoms();
    double best = 0.0;
    std::size_t best_i = 0;
    double best_r = 0.0, best_mass = 0.0;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            d[j] = dist(atoms[i].p, atoms[j].p);
        std::vector<std::size_t> order(n);
        for (std::size_t j = 0; j < n; ++j)
            order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        // walk radii in increasing order, keeping the running closed-ball mass
        KahanSum mass;
        std::size_t k = 0;
        auto consider = [&](double r) {
            while (k < n && d[order[k]] <= r) {
                mass.add(atoms[order[k]].w);
                ++k;
            }
            double ratio = mass.value() / r;
            if (ratio > best) {
                best = ratio;
                best_i = i;
                best_r = r;
                best_mass = mass.value();
            }
        };
        if (min_radius > 0.0)
            consider(min_radius);
        for (std::size_t t = 0; t < n; ++t) {
            double r = d[order[t]];
            if (r > 0.0 && r >= min_radius)
                consider(r);
        }
    }
    if (best_r == 0.0) {
        // no usable radius: single atom or fully coincident support
        rep.constant = std::numeric_limits<double>::infinity();
        rep.witness_center = atoms[0].p;
        rep.witness_radius = 0.0;
        rep.witness_mass = m.total_mass();
        return rep;
    }
    rep.constant = best;
    rep.witness_center = atoms[best_i].p;
    rep.witness_radius = best_r;
    rep.witness_mass = best_mass;
    return rep;
}

} // namespace curv
