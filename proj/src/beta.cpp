#include "curv/beta.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "curv/errors.hpp"
#include "curv/ksum.hpp"
#include "curv/menger.hpp"

namespace curv {

double beta_number(const std::vector<PlanarPoint>& pts, const Box& q) {
    if (!(q.side > 0.0))
        throw bad_input("beta_number: square side must be positive");
    Box tripled = q.scaled(3.0);
    std::vector<PlanarPoint> inside;
    for (const PlanarPoint& p : pts)
        if (tripled.contains(p))
            inside.push_back(p);
    if (inside.size() < 3)
        return 0.0;
    return min_width_strip(inside).width() / q.side;
}

namespace {

struct BetaWalk {
    int max_depth;
    KahanSum total;
    long long visited = 0;
    std::map<int, BetaLevelRow> rows;

    void visit(const std::vector<PlanarPoint>& pts, const std::vector<std::size_t>& idx,
               const DyadicSquare& q) {
        Box tripled = q.box().scaled(3.0);
        std::vector<std::size_t> keep;
        keep.reserve(idx.size());
        for (std::size_t k : idx)
            if (tripled.contains(pts[k]))
                keep.push_back(k);
        if (keep.empty())
            return;
        double beta = 0.0;
        if (keep.size() >= 3) {
            std::vector<PlanarPoint> sub;
            sub.reserve(keep.size());
            for (std::size_t k : keep)
                sub.push_back(pts[k]);
            beta = min_width_strip(sub).width() / q.side();
        }
        double contrib = beta * beta * q.side();
        total.add(contrib);
        ++visited;
        BetaLevelRow& row = rows[q.level];
        row.level = q.level;
        row.count += 1;
        row.max_beta = std::max(row.max_beta, beta);
        row.weighted_sum += contrib;
        if (q.level >= max_depth)
            return;
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
                visit(pts, keep, DyadicSquare{q.level + 1, 2 * q.i + dx, 2 * q.j + dy, false});
    }
};

} // namespace

BetaReport beta_criterion(const std::vector<PlanarPoint>& pts, int max_depth) {
    if (pts.empty())
        throw bad_input("beta_criterion: empty point set");
    for (const PlanarPoint& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw bad_input("beta_criterion: non-finite point");
    double minx = pts[0].x, maxx = minx, miny = pts[0].y, maxy = miny;
    for (const PlanarPoint& p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    double ext = std::max(maxx - minx, maxy - miny);
    double side = ext > 0.0 ? ext * (1.0 + 0x1p-40) : 1.0;
    DyadicSquare start = enclosing_dyadic(Box{minx, miny, side});

    BetaWalk walk;
    walk.max_depth = max_depth;
    std::vector<std::size_t> all(pts.size());
    for (std::size_t k = 0; k < all.size(); ++k)
        all[k] = k;
    walk.visit(pts, all, start);

    BetaReport rep;
    rep.start = start;
    rep.criterion_sum = walk.total.value();
    rep.normalized = rep.criterion_sum / start.side();
    rep.visited = walk.visited;
    for (const auto& [lvl, row] : walk.rows)
        rep.rows.push_back(row);
    return rep;
}

std::string beta_level_csv(const BetaReport& rep) {
    std::ostringstream out;
    out << "level,count,max_beta,weighted_sum\n";
    out.precision(17);
    for (const BetaLevelRow& row : rep.rows)
        out << row.level << "," << row.count << "," << row.max_beta << ","
            << row.weighted_sum << "\n";
    return out.str();
}

} // namespace curv
