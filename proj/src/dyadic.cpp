#include "curv/dyadic.hpp"

#include <algorithm>
#include <map>

namespace curv {

Box concentric_scale(const DyadicSquare& q, double lambda) {
    if (!(lambda > 0.0))
        throw bad_input("concentric_scale: scale factor must be positive");
    return q.box().scaled(lambda);
}

bool is_doubling(const Measure& m, const Box& q, double a, double b) {
    return m.box_mass(q.scaled(a)) <= b * m.box_mass(q);
}

static long long grid_index(double coord, double side) {
    double v = std::floor(coord / side);
    if (!(std::fabs(v) < 9e18))
        throw precondition_error("dyadic index out of range; translate coordinates toward the origin");
    return (long long)v;
}

std::optional<DyadicSquare> find_doubling_square(const Measure& m, PlanarPoint center,
                                                 double a, double b, int max_level) {
    bool found = false;
    for (const Atom& at : m.atoms())
        if (at.p.x == center.x && at.p.y == center.y) {
            found = true;
            break;
        }
    if (!found)
        throw precondition_error("find_doubling_square: center is not an atom of the measure");
    double res = m.resolution();
    for (int n = max_level; n <= 1073; ++n) {
        double s = std::ldexp(1.0, -n);
        if (std::isfinite(res) && s < res / 4.0 && n > max_level)
            break;
        DyadicSquare q{n, grid_index(center.x, s), grid_index(center.y, s), false};
        if (is_doubling(m, q.box(), a, b))
            return q;
    }
    return std::nullopt;
}

BalanceWitness balance_test(const Measure& m, const Box& q, double a, double b) {
    constexpr int N = 400;
    double mu_q = m.box_mass(q);
    if (!(mu_q > 0.0))
        throw precondition_error("balance_test: square carries no mass");
    double cs = q.side / N;
    std::map<std::pair<int, int>, KahanSum> cells;
    for (const Atom& at : m.atoms()) {
        if (!q.contains(at.p))
            continue;
        int ci = std::min(N - 1, (int)((at.p.x - q.x0) / cs));
        int cj = std::min(N - 1, (int)((at.p.y - q.y0) / cs));
        cells[{ci, cj}].add(at.w);
    }
    auto cell_box = [&](int ci, int cj) {
        return Box{q.x0 + ci * cs, q.y0 + cj * cs, cs};
    };
    double thr = b * mu_q;
    std::vector<std::pair<std::pair<int, int>, double>> heavy;
    std::pair<int, int> best_cell = cells.begin()->first;
    double best_mass = -1.0;
    for (const auto& [key, acc] : cells) {
        double mass = acc.value();
        if (mass >= thr)
            heavy.push_back({key, mass});
        if (mass > best_mass) {
            best_mass = mass;
            best_cell = key;
        }
    }
    // set distance between two grid cells
    auto cell_dist = [&](std::pair<int, int> u, std::pair<int, int> v) {
        double gx = std::max(0, std::abs(u.first - v.first) - 1) * cs;
        double gy = std::max(0, std::abs(u.second - v.second) - 1) * cs;
        return std::hypot(gx, gy);
    };
    for (std::size_t s = 0; s < heavy.size(); ++s)
        for (std::size_t t = s + 1; t < heavy.size(); ++t) {
            double d = cell_dist(heavy[s].first, heavy[t].first);
            if (d >= a * q.side) {
                BalanceWitness w;
                w.outcome = BalanceOutcome::balanced;
                w.q1 = cell_box(heavy[s].first.first, heavy[s].first.second);
                w.q2 = cell_box(heavy[t].first.first, heavy[t].first.second);
                w.mass1 = heavy[s].second;
                w.mass2 = heavy[t].second;
                w.cell_distance = d;
                w.mass_q = mu_q;
                return w;
            }
        }
    BalanceWitness w;
    w.outcome = BalanceOutcome::unbalanced;
    w.mass_q = mu_q;
    if (cells.size() == 1) {
        w.p = cell_box(best_cell.first, best_cell.second);
    } else {
        // all heavy cells sit within a/40-ish of the heaviest one, so a
        // square of side l(q)/10 around it catches everything heavy
        double ps = q.side / 10.0;
        PlanarPoint c = cell_box(best_cell.first, best_cell.second).center();
        double px = std::max(q.x0, std::min(c.x - ps / 2, q.x0 + q.side - ps));
        double py = std::max(q.y0, std::min(c.y - ps / 2, q.y0 + q.side - ps));
        w.p = Box{px, py, ps};
    }
    w.mass_p = m.box_mass(w.p);
    return w;
}

std::optional<Box> find_balanced_ancestor(const Measure& m, const Box& q, const Box& R,
                                          double a, double b) {
    for (double t = 2.0; q.side * t <= 8.0 * R.side; t *= 2.0) {
        Box cand = q.scaled(t);
        if (!(m.box_mass(cand) > 0.0))
            continue;
        if (balance_test(m, cand, a, b).outcome == BalanceOutcome::balanced)
            return cand;
    }
    return std::nullopt;
}

BesicovitchResult besicovitch_select(const std::vector<BesicovitchCandidate>& candidates) {
    for (std::size_t k = 0; k < candidates.size(); ++k)
        if (!candidates[k].square.half().contains(candidates[k].center))
            throw precondition_error("besicovitch_select: candidate " + std::to_string(k) +
                                     " has its center outside the half square");
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
        const DyadicSquare& a = candidates[u].square;
        const DyadicSquare& b = candidates[v].square;
        double sa = a.side(), sb = b.side();
        if (sa != sb)
            return sa > sb;
        if (a.level != b.level)
            return a.level < b.level;
        if (a.i != b.i)
            return a.i < b.i;
        if (a.j != b.j)
            return a.j < b.j;
        return u < v;
    });
    BesicovitchResult res;
    std::vector<Box> kept_boxes;
    for (std::size_t k : order) {
        bool covered = false;
        for (const Box& bx : kept_boxes)
            if (bx.contains(candidates[k].center)) {
                covered = true;
                break;
            }
        if (!covered) {
            res.kept.push_back(k);
            kept_boxes.push_back(candidates[k].square.box());
        }
    }
    // exact overlap: scan vertical strips anchored at left edges, then
    // count max y-stabbing among boxes spanning the strip
    auto max_overlap = [](const std::vector<Box>& boxes) {
        int best = 0;
        for (const Box& anchor : boxes) {
            double e = anchor.x0;
            std::vector<double> y0s, y1s;
            for (const Box& bx : boxes)
                if (bx.x0 <= e && e < bx.x0 + bx.side) {
                    y0s.push_back(bx.y0);
                    y1s.push_back(bx.y0 + bx.side);
                }
            std::sort(y1s.begin(), y1s.end());
            std::vector<double> starts = y0s;
            std::sort(starts.begin(), starts.end());
            for (double y : y0s) {
                auto nstart = std::upper_bound(starts.begin(), starts.end(), y) - starts.begin();
                auto nend = std::upper_bound(y1s.begin(), y1s.end(), y) - y1s.begin();
                best = std::max(best, (int)(nstart - nend));
            }
        }
        return best;
    };
    res.overlap = max_overlap(kept_boxes);
    std::vector<Box> kept_halves;
    kept_halves.reserve(res.kept.size());
    for (std::size_t k : res.kept)
        kept_halves.push_back(candidates[k].square.half());
    res.half_overlap = max_overlap(kept_halves);
    return res;
}

DyadicSquare enclosing_dyadic(const Box& b) {
    if (!(b.side > 0.0))
        throw bad_input("enclosing_dyadic: box side must be positive");
    if (b.x0 < 0.0 && b.x0 + b.side > 0.0)
        throw precondition_error("enclosing_dyadic: box straddles x = 0; translate the data first");
    if (b.y0 < 0.0 && b.y0 + b.side > 0.0)
        throw precondition_error("enclosing_dyadic: box straddles y = 0; translate the data first");
    int n = (int)std::floor(-std::log2(b.side));
    while (std::ldexp(1.0, -n) < b.side)
        --n;
    for (; n >= -62; --n) {
        double s = std::ldexp(1.0, -n);
        long long i = grid_index(b.x0, s);
        long long j = grid_index(b.y0, s);
        if (b.x0 + b.side <= (double)(i + 1) * s && b.y0 + b.side <= (double)(j + 1) * s)
            return DyadicSquare{n, i, j, false};
    }
    throw precondition_error("enclosing_dyadic: box spans too wide a range");
}

DyadicSquare enclosing_four_dyadic_half(const Box& b) {
    if (!(b.side > 0.0))
        throw bad_input("enclosing_four_dyadic_half: box side must be positive");
    int n = (int)std::floor(std::log2(2.0 / b.side));
    while (2.0 * std::ldexp(1.0, -n) < b.side)
        --n;
    for (; n >= -61; --n) {
        double u = std::ldexp(1.0, -n);
        // smallest corner indices whose half square can still reach the far edge
        long long i = (long long)std::ceil((b.x0 + b.side) / u) - 3;
        long long j = (long long)std::ceil((b.y0 + b.side) / u) - 3;
        Box half{(double)(i + 1) * u, (double)(j + 1) * u, 2.0 * u};
        if (half.x0 <= b.x0 && b.x0 + b.side <= half.x0 + half.side &&
            half.y0 <= b.y0 && b.y0 + b.side <= half.y0 + half.side)
            return DyadicSquare{n, i, j, true};
    }
    throw precondition_error("enclosing_four_dyadic_half: box spans too wide a range");
}

} // namespace curv
