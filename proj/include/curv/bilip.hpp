#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curv/capacity.hpp"
#include "curv/curvature.hpp"
#include "curv/measure.hpp"

namespace curv {

enum class MapKind { affine, shear, graph_shift, split_translate, composition };

// Plane-to-plane map built from a small spec language:
//   affine:a,b,c,d,tx,ty   (x,y) -> (a x + b y + tx, c x + d y + ty)
//   shear:L                (x,y) -> (x, L y)
//   graph:x,y;x,y;...      (x,y) -> (x, y + A(x)), A piecewise linear through
//                          the listed breakpoints, constant outside them
//   split                  translates the left half plane up by 1
//   compose:S+S+...        stages applied left to right
class PlaneMap {
public:
    static PlaneMap affine(double a, double b, double c, double d, double tx, double ty);
    static PlaneMap shear(double lambda);
    static PlaneMap graph_shift(std::vector<PlanarPoint> breakpoints);
    static PlaneMap split_translate();
    static PlaneMap compose(std::vector<PlaneMap> stages);
    static PlaneMap parse(const std::string& spec);

    PlanarPoint operator()(PlanarPoint p) const;
    MapKind kind() const;

    // product of per-stage bounds; +inf when some stage is not bilipschitz
    double declared_bilip() const;
    bool not_bilipschitz() const;

    std::string describe() const;

private:
    struct Stage {
        MapKind kind = MapKind::affine;
        double a = 1, b = 0, c = 0, d = 1, tx = 0, ty = 0;
        double lambda = 1;
        std::vector<PlanarPoint> bps;
    };
    std::vector<Stage> stages_;

    static Stage parse_stage(const std::string& spec);
    static double stage_bound(const Stage& s);
    static PlanarPoint apply_stage(const Stage& s, PlanarPoint p);
    static std::string stage_spec(const Stage& s);
};

// same weights, atom for atom; applying a composition equals applying its
// stages one after another, bit for bit
Measure pushforward(const PlaneMap& f, const Measure& m);

struct BilipEstimate {
    double lower = 0.0; // min sampled |f(x)-f(y)| / |x-y|
    double upper = 0.0; // max
    long long pairs_used = 0;
};

BilipEstimate empirical_bilip(const PlaneMap& f, const Measure& m, long long pairs,
                              std::uint64_t seed);

struct TransportReport {
    double mass = 0.0;
    CurvatureResult before;
    CurvatureResult after;
    double ratio = 0.0; // curvature after over (mass + curvature before)
    BilipEstimate empirical;
    double declared_bilip = 0.0;
    bool not_bilipschitz = false;
};

// Compares total curvature before and after the map. Exact evaluation up to
// exact_cutoff atoms, Monte Carlo with the same triple draws beyond it.
TransportReport transport_experiment(const PlaneMap& f, const Measure& m,
                                     std::size_t exact_cutoff, long long mc_samples,
                                     std::uint64_t seed, long long bilip_pairs = 100000);

struct CapacityRatioReport {
    CapacityEstimate before;
    CapacityEstimate after;
    double ratio = 0.0; // capacity estimate after over before
    double declared_bilip = 0.0;
    bool not_bilipschitz = false;
};

CapacityRatioReport capacity_ratio_experiment(const PlaneMap& f,
                                              const std::vector<PlanarPoint>& support,
                                              const CapacityParams& params = {});

} // namespace curv
