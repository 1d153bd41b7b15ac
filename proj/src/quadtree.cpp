#include "curv/quadtree.hpp"

#include <algorithm>

namespace curv {

namespace {
constexpr std::size_t kLeafSize = 16;
constexpr int kMaxDepth = 48;
} // namespace

QuadTree::QuadTree(const Measure& m) : m_(&m) {
    const auto& atoms = m.atoms();
    order_.resize(atoms.size());
    for (std::size_t k = 0; k < order_.size(); ++k)
        order_[k] = k;

    Box root{0.0, 0.0, 1.0};
    if (!atoms.empty()) {
        double lox = atoms[0].p.x, hix = lox, loy = atoms[0].p.y, hiy = loy;
        for (const Atom& a : atoms) {
            lox = std::min(lox, a.p.x);
            hix = std::max(hix, a.p.x);
            loy = std::min(loy, a.p.y);
            hiy = std::max(hiy, a.p.y);
        }
        double ext = std::max(hix - lox, hiy - loy);
        double side = ext > 0.0 ? ext * (1.0 + 1e-9) : 1.0;
        root = Box{lox, loy, side};
    }

    struct Job {
        std::size_t node;
        std::size_t first, count;
        int depth;
    };
    nodes_.push_back(Node{root, 0.0, 0, order_.size(), {npos, npos, npos, npos}});
    std::vector<Job> stack{{0, 0, order_.size(), 0}};
    while (!stack.empty()) {
        Job job = stack.back();
        stack.pop_back();
        Node& nd = nodes_[job.node];
        nd.first = job.first;
        nd.count = job.count;
        if (job.count <= kLeafSize || job.depth >= kMaxDepth)
            continue;
        PlanarPoint c = nd.bounds.center();
        auto begin = order_.begin() + (std::ptrdiff_t)job.first;
        auto end = begin + (std::ptrdiff_t)job.count;
        // quadrant order: SW, SE, NW, NE; stable partition keeps atom order
        // inside each child deterministic
        auto quad = [&](std::size_t idx) {
            const PlanarPoint& p = atoms[idx].p;
            return (p.y >= c.y ? 2 : 0) + (p.x >= c.x ? 1 : 0);
        };
        std::stable_sort(begin, end, [&](std::size_t u, std::size_t v) { return quad(u) < quad(v); });
        std::size_t starts[5];
        starts[0] = job.first;
        std::size_t pos = job.first;
        for (int q = 0; q < 4; ++q) {
            while (pos < job.first + job.count && quad(order_[pos]) == q)
                ++pos;
            starts[q + 1] = pos;
        }
        double h = nd.bounds.side / 2;
        Box qb[4] = {
            {nd.bounds.x0, nd.bounds.y0, h},
            {nd.bounds.x0 + h, nd.bounds.y0, h},
            {nd.bounds.x0, nd.bounds.y0 + h, h},
            {nd.bounds.x0 + h, nd.bounds.y0 + h, h},
        };
        for (int q = 0; q < 4; ++q) {
            std::size_t cnt = starts[q + 1] - starts[q];
            if (cnt == 0)
                continue;
            std::size_t id = nodes_.size();
            nodes_.push_back(Node{qb[q], 0.0, starts[q], cnt, {npos, npos, npos, npos}});
            nodes_[job.node].kids[q] = id;
            stack.push_back({id, starts[q], cnt, job.depth + 1});
        }
    }
    // cache masses bottom-up; children were appended after parents, so a
    // reverse index walk sees children first
    for (std::size_t k = nodes_.size(); k-- > 0;) {
        Node& nd = nodes_[k];
        KahanSum s;
        if (nd.kids[0] == npos && nd.kids[1] == npos && nd.kids[2] == npos && nd.kids[3] == npos) {
            std::vector<std::size_t> idx(order_.begin() + (std::ptrdiff_t)nd.first,
                                         order_.begin() + (std::ptrdiff_t)(nd.first + nd.count));
            std::sort(idx.begin(), idx.end());
            for (std::size_t t : idx)
                s.add(atoms[t].w);
        } else {
            for (int q = 0; q < 4; ++q)
                if (nd.kids[q] != npos)
                    s.add(nodes_[nd.kids[q]].mass);
        }
        nd.mass = s.value();
    }
}

double QuadTree::subtree_atom_mass(std::size_t k) const {
    const Node& nd = nodes_[k];
    std::vector<std::size_t> idx(order_.begin() + (std::ptrdiff_t)nd.first,
                                 order_.begin() + (std::ptrdiff_t)(nd.first + nd.count));
    std::sort(idx.begin(), idx.end());
    KahanSum s;
    for (std::size_t t : idx)
        s.add(m_->atoms()[t].w);
    return s.value();
}

void QuadTree::mass_rec(std::size_t k, const Box& q, KahanSum& acc) const {
    const Node& nd = nodes_[k];
    if (nd.count == 0 || !q.intersects(nd.bounds))
        return;
    if (q.contains_box(nd.bounds)) {
        acc.add(nd.mass);
        return;
    }
    if (nd.kids[0] == npos && nd.kids[1] == npos && nd.kids[2] == npos && nd.kids[3] == npos) {
        std::vector<std::size_t> idx(order_.begin() + (std::ptrdiff_t)nd.first,
                                     order_.begin() + (std::ptrdiff_t)(nd.first + nd.count));
        std::sort(idx.begin(), idx.end());
        for (std::size_t t : idx)
            if (q.contains(m_->atoms()[t].p))
                acc.add(m_->atoms()[t].w);
        return;
    }
    for (int c = 0; c < 4; ++c)
        if (nd.kids[c] != npos)
            mass_rec(nd.kids[c], q, acc);
}

double QuadTree::mass_in_box(const Box& q) const {
    if (nodes_.empty())
        return 0.0;
    KahanSum acc;
    mass_rec(0, q, acc);
    return acc.value();
}

void QuadTree::box_rec(std::size_t k, const Box& q, std::vector<std::size_t>& out) const {
    const Node& nd = nodes_[k];
    if (nd.count == 0 || !q.intersects(nd.bounds))
        return;
    if (q.contains_box(nd.bounds)) {
        out.insert(out.end(), order_.begin() + (std::ptrdiff_t)nd.first,
                   order_.begin() + (std::ptrdiff_t)(nd.first + nd.count));
        return;
    }
    if (nd.kids[0] == npos && nd.kids[1] == npos && nd.kids[2] == npos && nd.kids[3] == npos) {
        for (std::size_t t = nd.first; t < nd.first + nd.count; ++t)
            if (q.contains(m_->atoms()[order_[t]].p))
                out.push_back(order_[t]);
        return;
    }
    for (int c = 0; c < 4; ++c)
        if (nd.kids[c] != npos)
            box_rec(nd.kids[c], q, out);
}

std::vector<std::size_t> QuadTree::atoms_in_box(const Box& q) const {
    std::vector<std::size_t> out;
    if (!nodes_.empty())
        box_rec(0, q, out);
    std::sort(out.begin(), out.end());
    return out;
}

void QuadTree::ball_rec(std::size_t k, PlanarPoint c, double r, double r2,
                        std::vector<std::size_t>& out) const {
    const Node& nd = nodes_[k];
    if (nd.count == 0 || dist_to_box(c, nd.bounds) > r)
        return;
    // farthest corner inside the ball: whole node is in
    double fx = std::max(std::fabs(c.x - nd.bounds.x0), std::fabs(c.x - (nd.bounds.x0 + nd.bounds.side)));
    double fy = std::max(std::fabs(c.y - nd.bounds.y0), std::fabs(c.y - (nd.bounds.y0 + nd.bounds.side)));
    if (fx * fx + fy * fy <= r2) {
        out.insert(out.end(), order_.begin() + (std::ptrdiff_t)nd.first,
                   order_.begin() + (std::ptrdiff_t)(nd.first + nd.count));
        return;
    }
    if (nd.kids[0] == npos && nd.kids[1] == npos && nd.kids[2] == npos && nd.kids[3] == npos) {
        for (std::size_t t = nd.first; t < nd.first + nd.count; ++t)
            if (dist2(m_->atoms()[order_[t]].p, c) <= r2)
                out.push_back(order_[t]);
        return;
    }
    for (int q = 0; q < 4; ++q)
        if (nd.kids[q] != npos)
            ball_rec(nd.kids[q], c, r, r2, out);
}

std::vector<std::size_t> QuadTree::atoms_in_ball(PlanarPoint center, double r) const {
    std::vector<std::size_t> out;
    if (r < 0.0)
        throw bad_input("atoms_in_ball: negative radius");
    if (!nodes_.empty())
        ball_rec(0, center, r, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace curv
