#include "curv/generators.hpp"

#include <cmath>

#include "curv/bilip.hpp"
#include "curv/errors.hpp"
#include "curv/rng.hpp"

namespace curv {

Measure cantor4(int generation) {
    if (generation < 0 || generation > 12)
        throw bad_input("cantor4: generation must be between 0 and 12");
    int d = generation;
    long long count = 1LL << (2 * d);
    double w = std::ldexp(1.0, -2 * d);
    double half_cell = std::ldexp(1.0, -2 * d - 1);
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)count);
    for (long long t = 0; t < count; ++t) {
        double x = 0.0, y = 0.0;
        for (int k = 1; k <= d; ++k) {
            int pair = (int)((t >> (2 * (d - k))) & 3);
            // corner offsets 0 and 3/4 of the current cell, all dyadic so
            // the sums below are exact
            if (pair & 1)
                x += 3.0 * std::ldexp(1.0, -2 * k);
            if (pair & 2)
                y += 3.0 * std::ldexp(1.0, -2 * k);
        }
        atoms.push_back({{x + half_cell, y + half_cell}, w});
    }
    return Measure(std::move(atoms), "cantor4:" + std::to_string(d));
}

Measure segment_measure(int n) {
    if (n < 1)
        throw bad_input("segment: need at least 1 atom");
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)n);
    double w = 1.0 / n;
    if (n == 1) {
        atoms.push_back({{0.0, 0.0}, 1.0});
    } else {
        for (int i = 0; i < n; ++i)
            atoms.push_back({{(double)i / (n - 1), 0.0}, w});
    }
    return Measure(std::move(atoms), "segment:" + std::to_string(n));
}

Measure circle_measure(int n) {
    if (n < 1)
        throw bad_input("circle: need at least 1 atom");
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)n);
    double w = 1.0 / n;
    constexpr double tau = 6.283185307179586476925286766559;
    for (int i = 0; i < n; ++i) {
        double a = tau * i / n;
        atoms.push_back({{0.5 + 0.4 * std::cos(a), 0.5 + 0.4 * std::sin(a)}, w});
    }
    return Measure(std::move(atoms), "circle:" + std::to_string(n));
}

Measure lipschitz_graph_measure(const std::vector<PlanarPoint>& breakpoints, int n) {
    if (n < 2)
        throw bad_input("graph: need at least 2 samples");
    PlaneMap lift = PlaneMap::graph_shift(breakpoints);
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)n);
    double w = 1.0 / n;
    for (int i = 0; i < n; ++i)
        atoms.push_back({lift({(double)i / (n - 1), 0.0}), w});
    return Measure(std::move(atoms), "graph:" + std::to_string(n));
}

Measure grid_measure(int k) {
    if (k < 1)
        throw bad_input("grid: need at least 1 cell per side");
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)k * (std::size_t)k);
    double w = 1.0 / ((double)k * k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            atoms.push_back({{(i + 0.5) / k, (j + 0.5) / k}, w});
    return Measure(std::move(atoms), "grid:" + std::to_string(k));
}

Measure random_cloud(int n, std::uint64_t seed) {
    if (n < 1)
        throw bad_input("cloud: need at least 1 atom");
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t)n);
    double w = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        double x = counter_double(seed, 2ull * (std::uint64_t)i);
        double y = counter_double(seed, 2ull * (std::uint64_t)i + 1);
        atoms.push_back({{x, y}, w});
    }
    return Measure(std::move(atoms), "cloud:" + std::to_string(n));
}

Measure parse_generator(const std::string& spec, std::uint64_t seed) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto parse_count = [&](const std::string& tok) {
        try {
            std::size_t used = 0;
            long v = std::stol(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            return (int)v;
        } catch (const std::exception&) {
            throw bad_input("generator spec: bad count '" + tok + "'");
        }
    };
    if (kind == "cantor4")
        return cantor4(parse_count(args));
    if (kind == "segment")
        return segment_measure(parse_count(args));
    if (kind == "circle")
        return circle_measure(parse_count(args));
    if (kind == "grid")
        return grid_measure(parse_count(args));
    if (kind == "cloud")
        return random_cloud(parse_count(args), seed);
    if (kind == "graph") {
        auto last = args.rfind(':');
        if (last == std::string::npos)
            throw bad_input("generator spec: graph needs breakpoints and a sample count");
        std::vector<PlanarPoint> bps;
        std::string pair;
        auto flush = [&] {
            auto comma = pair.find(',');
            if (comma == std::string::npos)
                throw bad_input("generator spec: graph breakpoint '" + pair + "' is not x,y");
            try {
                bps.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
            } catch (const std::exception&) {
                throw bad_input("generator spec: bad breakpoint '" + pair + "'");
            }
            pair.clear();
        };
        for (char ch : args.substr(0, last))
            if (ch == ';')
                flush();
            else
                pair.push_back(ch);
        flush();
        return lipschitz_graph_measure(bps, parse_count(args.substr(last + 1)));
    }
    throw bad_input("generator spec: unknown kind '" + kind + "'");
}

} // namespace curv
