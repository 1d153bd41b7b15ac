#include "curv/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "curv/curvature.hpp"
#include "curv/errors.hpp"
#include "curv/rng.hpp"

namespace curv {

namespace {

Measure assemble(const std::vector<PlanarPoint>& support, const std::vector<double>& w) {
    std::vector<Atom> atoms;
    atoms.reserve(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
        atoms.push_back({support[i], w[i]});
    return Measure(std::move(atoms));
}

// scale the weights until both constraints hold; returns the shrink factor
double project(const std::vector<PlanarPoint>& support, std::vector<double>& w, double h,
               double eta) {
    double applied = 1.0;
    Measure m = assemble(support, w);
    double g = growth_constant(m, h).constant / eta;
    if (g > 1.0) {
        for (double& v : w)
            v /= g;
        applied /= g;
        m = assemble(support, w);
    }
    double c2 = c2_total(m, 0.0).value;
    double mass = m.total_mass();
    if (c2 > mass) {
        double t = std::sqrt(mass / c2);
        for (double& v : w)
            v *= t;
        applied *= t;
    }
    return applied;
}

double total(const std::vector<double>& w) {
    KahanSum s;
    for (double v : w)
        s.add(v);
    return s.value();
}

CapacityEstimate estimate_core(const std::vector<PlanarPoint>& support,
                               const CapacityParams& params, double eta) {
    if (support.empty())
        throw bad_input("capacity: empty support");
    for (const PlanarPoint& p : support)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw bad_input("capacity: non-finite support point");
    if (!(eta > 0.0))
        throw bad_input("capacity: growth cap slope must be positive");

    CapacityEstimate est;
    double min2 = std::numeric_limits<double>::infinity();
    double max2 = 0.0;
    for (std::size_t i = 0; i + 1 < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            double d2v = dist2(support[i], support[j]);
            if (d2v > 0.0)
                min2 = std::min(min2, d2v);
            max2 = std::max(max2, d2v);
        }
    double h = params.resolution;
    if (!(h > 0.0))
        h = std::isfinite(min2) ? std::sqrt(min2) : 0.0;
    if (!(h > 0.0)) {
        // a single spot carries no mass under linear growth
        est.report.feasible = true;
        est.report.resolution = 0.0;
        return est;
    }

    // start at diameter-proportional mass: every ratio the search compares is
    // then degree zero in the support scale, so branches resolve the same way
    // for a dilated copy and the estimate stays exactly homogeneous
    std::vector<double> w(support.size(), std::sqrt(max2) / (double)support.size());
    double last_scale = project(support, w, h, eta);
    double best_mass = total(w);

    for (int pass = 1; pass <= params.passes; ++pass) {
        std::vector<double> trial = w;
        for (std::size_t i = 0; i < trial.size(); ++i) {
            std::uint64_t u =
                counter_u64(params.seed, (std::uint64_t)pass * trial.size() + i);
            if (u & 1)
                trial[i] *= 1.0 + params.step;
        }
        double scale = project(support, trial, h, eta);
        double mass = total(trial);
        if (mass > best_mass * (1.0 + 1e-12)) {
            w = std::move(trial);
            best_mass = mass;
            last_scale = scale;
            est.accepted_passes += 1;
        }
    }

    est.witness = assemble(support, w);
    est.value = est.witness.total_mass();
    est.report = verify_feasibility(est.witness, h, eta);
    est.report.scale_applied = last_scale;
    return est;
}

} // namespace

CapacityEstimate estimate_gamma(const std::vector<PlanarPoint>& support,
                                const CapacityParams& params) {
    return estimate_core(support, params, 1.0);
}

CapacityEstimate estimate_alpha(const std::vector<PlanarPoint>& support,
                                const CapacityParams& params) {
    return estimate_core(support, params, params.eta);
}

FeasibilityReport verify_feasibility(const Measure& m, double resolution, double eta) {
    if (!(eta > 0.0))
        throw bad_input("verify_feasibility: growth cap slope must be positive");
    FeasibilityReport rep;
    rep.resolution = resolution;
    if (m.empty()) {
        rep.feasible = true;
        return rep;
    }
    if (!(resolution > 0.0))
        throw bad_input("verify_feasibility: resolution must be positive");
    rep.growth_ratio = growth_constant(m, resolution).constant / eta;
    double mass = m.total_mass();
    rep.curvature_ratio = c2_total(m, 0.0).value / mass;
    rep.feasible = rep.growth_ratio <= 1.0 + 1e-9 && rep.curvature_ratio <= 1.0 + 1e-9;
    return rep;
}

} // namespace curv
