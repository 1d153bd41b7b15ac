#pragma once

#include <vector>

#include "curv/measure.hpp"
#include "curv/rng.hpp"

namespace testutil {

inline curv::Measure random_measure(int n, std::uint64_t seed, double wlo = 0.5,
                                    double whi = 1.5) {
    std::vector<curv::Atom> atoms;
    atoms.reserve((std::size_t)n);
    for (int i = 0; i < n; ++i) {
        double x = curv::counter_double(seed, 4ull * i);
        double y = curv::counter_double(seed, 4ull * i + 1);
        double w = wlo + (whi - wlo) * curv::counter_double(seed, 4ull * i + 2);
        atoms.push_back({{x, y}, w});
    }
    return curv::Measure(std::move(atoms));
}

inline std::vector<curv::PlanarPoint> random_points(int n, std::uint64_t seed) {
    std::vector<curv::PlanarPoint> pts;
    pts.reserve((std::size_t)n);
    for (int i = 0; i < n; ++i)
        pts.push_back({curv::counter_double(seed, 2ull * i),
                       curv::counter_double(seed, 2ull * i + 1)});
    return pts;
}

} // namespace testutil
