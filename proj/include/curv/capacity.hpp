#pragma once

#include <cstdint>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

struct CapacityParams {
    std::uint64_t seed = 0;
    int passes = 50;       // greedy improvement rounds
    double step = 0.1;     // relative weight boost tried per round
    double resolution = 0; // growth-scan floor; 0 means the support's min spacing
    double eta = 1.0;      // growth cap slope for the alpha variant
};

struct FeasibilityReport {
    double growth_ratio = 0.0;    // worst ball mass over eta * r
    double curvature_ratio = 0.0; // total curvature over total mass
    bool feasible = false;
    double scale_applied = 1.0;   // shrink factor of the final projection
    double resolution = 0.0;
};

struct CapacityEstimate {
    double value = 0.0; // mass of the feasible witness measure
    Measure witness;
    FeasibilityReport report;
    int accepted_passes = 0;
};

// Largest mass found for a measure on the support whose balls grow at most
// linearly and whose curvature stays below its mass: uniform start, projection
// onto the constraints, then seeded greedy reweighting.
CapacityEstimate estimate_gamma(const std::vector<PlanarPoint>& support,
                                const CapacityParams& params = {});

// Same search with the growth cap slope eta; eta = 1 matches estimate_gamma.
CapacityEstimate estimate_alpha(const std::vector<PlanarPoint>& support,
                                const CapacityParams& params = {});

FeasibilityReport verify_feasibility(const Measure& m, double resolution, double eta = 1.0);

} // namespace curv
