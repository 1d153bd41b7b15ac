#include "curv/corona.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace curv {

CoronaContext::CoronaContext(const Measure& m, CoronaParams params)
    : m_(m), params_(params), tree_(m), kernel_(m) {
    if (m.empty())
        throw bad_input("corona: empty measure");
}

DyadicSquare CoronaContext::root_square() const {
    const auto& atoms = m_.atoms();
    double minx = atoms[0].p.x, maxx = minx, miny = atoms[0].p.y, maxy = miny;
    for (const Atom& a : atoms) {
        minx = std::min(minx, a.p.x);
        maxx = std::max(maxx, a.p.x);
        miny = std::min(miny, a.p.y);
        maxy = std::max(maxy, a.p.y);
    }
    double ext = std::max(maxx - minx, maxy - miny);
    // pad so atoms sitting on the far edge land inside the half-open box
    double side = ext > 0.0 ? ext * (1.0 + 0x1p-40) : 1.0;
    DyadicSquare cell = enclosing_dyadic(Box{minx, miny, side});
    // the enclosing cell becomes the lower-left central cell of the root
    return DyadicSquare{cell.level, cell.i - 1, cell.j - 1, true};
}

namespace {

double annulus_kernel_sum(const KernelCache& kc, std::size_t atom, double r_lo, double r_hi) {
    return kc.truncated_row_sum(atom, r_lo) - kc.truncated_row_sum(atom, r_hi);
}

Classification classify_core(const CoronaContext& ctx, const Box& q, const DyadicSquare& root,
                             double theta_root) {
    const CoronaParams& P = ctx.params();
    Classification cls;
    double mq = ctx.box_mass(q);
    double theta_q = mq / q.side;
    cls.density_ratio = theta_q / theta_root;
    if (theta_q >= P.threshold_a * theta_root) {
        cls.kind = SquareClass::high_density;
        return cls;
    }
    if (mq > 0.0) {
        double r_lo = std::ldexp(q.side, -10);
        double r_hi = 4.0 * root.side();
        double tau = P.threshold_eps0 * theta_root * theta_root;
        KahanSum heavy;
        for (std::size_t idx : ctx.tree().atoms_in_box(q))
            if (annulus_kernel_sum(ctx.kernel(), idx, r_lo, r_hi) >= tau)
                heavy.add(ctx.measure().atoms()[idx].w);
        cls.heavy_fraction = heavy.value() / mq;
        if (heavy.value() >= 0.5 * mq) {
            cls.kind = SquareClass::high_concentration;
            return cls;
        }
    }
    double cap = root.side() / 8.0;
    for (double t = 128.0; q.side * t <= cap; t *= 2.0) {
        Box s = q.scaled(t);
        double theta_s = ctx.box_mass(s) / s.side;
        if (theta_s <= P.threshold_delta * theta_root) {
            cls.kind = SquareClass::low_density;
            cls.sparse_square = s;
            cls.sparse_theta = theta_s;
            return cls;
        }
    }
    return cls;
}

void validate_classify_input(const CoronaContext& ctx, const Box& q, const DyadicSquare& root) {
    const CoronaParams& P = ctx.params();
    if (!(q.side > 0.0))
        throw bad_input("classify_square: square side must be positive");
    double ratio = root.side() / q.side;
    int e = 0;
    double mant = std::frexp(ratio, &e);
    if (mant != 0.5 || e - 1 < 5 || std::ldexp(q.side, e - 1) != root.side())
        throw precondition_error(
            "classify_square: side must be the root side divided by 2^n with n >= 5");
    bool centered = false;
    Box tripled = root.box().scaled(3.0);
    for (std::size_t idx : ctx.tree().atoms_in_box(tripled)) {
        const PlanarPoint& p = ctx.measure().atoms()[idx].p;
        Box rebuilt = box_centered(p, q.side);
        if (rebuilt.x0 == q.x0 && rebuilt.y0 == q.y0) {
            centered = true;
            break;
        }
    }
    if (!centered)
        throw precondition_error(
            "classify_square: square is not centered at an atom of the tripled root");
    double mq = ctx.box_mass(q);
    if (ctx.box_mass(q.scaled(P.doubling_center_a)) > P.doubling_center_b * mq)
        throw precondition_error("classify_square: square fails the center doubling requirement");
}

} // namespace

Classification classify_square(const CoronaContext& ctx, const Box& q, const DyadicSquare& root) {
    validate_classify_input(ctx, q, root);
    double theta_root = ctx.box_mass(root.box()) / root.side();
    if (!(theta_root > 0.0))
        throw precondition_error("classify_square: root square carries no mass");
    return classify_core(ctx, q, root, theta_root);
}

Classification classify_square(const Measure& m, const Box& q, const DyadicSquare& root,
                               const CoronaParams& params) {
    CoronaContext ctx(m, params);
    return classify_square(ctx, q, root);
}

BadFamily build_bad(const CoronaContext& ctx, const DyadicSquare& root) {
    const CoronaParams& P = ctx.params();
    const Measure& m = ctx.measure();
    double theta_root = ctx.box_mass(root.box()) / root.side();
    Box tripled = root.box().scaled(3.0);
    double floor_side = m.resolution();

    BadFamily fam;
    std::vector<BesicovitchCandidate> candidates;
    std::vector<std::pair<Box, Classification>> cores;
    std::vector<std::size_t> centers;
    for (std::size_t idx : ctx.tree().atoms_in_box(tripled)) {
        const PlanarPoint& x = m.atoms()[idx].p;
        for (int n = 5; n <= 1100; ++n) {
            double s = std::ldexp(root.side(), -n);
            if (std::isfinite(floor_side) && s < floor_side)
                break;
            Box q = box_centered(x, s);
            double mq = ctx.box_mass(q);
            if (ctx.box_mass(q.scaled(P.doubling_center_a)) > P.doubling_center_b * mq)
                continue;
            fam.scanned.push_back(q);
            fam.scanned_mass.push_back(mq);
            Classification cls = classify_core(ctx, q, root, theta_root);
            if (cls.kind == SquareClass::none)
                continue;
            // four-dyadic wrap at the tightest level whose half square can
            // hold q; q has dyadic side, so the grid division is exact
            int e = 0;
            std::frexp(s, &e);
            DyadicSquare hat;
            hat.level = 1 - e; // unit() == s
            hat.four_dyadic = true;
            double u = hat.unit();
            hat.i = (long long)std::ceil(x.x / u - 2.5);
            hat.j = (long long)std::ceil(x.y / u - 2.5);
            candidates.push_back({hat, x});
            cores.push_back({q, cls});
            centers.push_back(idx);
            break; // first hit is the largest classified square for this atom
        }
    }
    fam.candidates_before_selection = candidates.size();
    BesicovitchResult sel = besicovitch_select(candidates);
    fam.besicovitch_overlap = sel.overlap;
    fam.half_overlap = sel.half_overlap;
    for (std::size_t k : sel.kept) {
        BadSquare b;
        b.square = candidates[k].square;
        b.core = cores[k].first;
        b.center_atom = centers[k];
        b.cls = cores[k].second;
        fam.squares.push_back(b);
    }
    return fam;
}

namespace {

struct DagNode {
    DyadicSquare sq;
    SquareClass origin = SquareClass::none;
    double mass = 0.0;
    double theta = 0.0;
    int alive_in = 0;
    bool chosen = false;
    int half_overlap = 0;
    std::vector<std::pair<std::size_t, bool>> out; // child index, edge alive
};

} // namespace

CoronaDecomposition build_top(const CoronaContext& ctx) {
    const CoronaParams& P = ctx.params();
    CoronaDecomposition dec;
    dec.params = P;

    std::vector<DagNode> nodes;
    std::map<std::tuple<int, long long, long long>, std::size_t> lookup;
    auto intern = [&](const DyadicSquare& sq, SquareClass origin) {
        auto key = std::make_tuple(sq.level, sq.i, sq.j);
        auto it = lookup.find(key);
        if (it != lookup.end())
            return std::make_pair(it->second, false);
        DagNode node;
        node.sq = sq;
        node.origin = origin;
        node.mass = ctx.box_mass(sq.box());
        node.theta = node.mass / sq.side();
        nodes.push_back(node);
        lookup.emplace(key, nodes.size() - 1);
        return std::make_pair(nodes.size() - 1, true);
    };

    DyadicSquare root = ctx.root_square();
    (void)intern(root, SquareClass::none);
    nodes[0].alive_in = 1; // the root square never loses its seat

    // generation sweep: children of every reachable square, deduplicated
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        DyadicSquare sq = nodes[head].sq;
        double theta_here = nodes[head].theta;
        if (ctx.tree().atoms_in_box(sq.box().scaled(3.0)).size() <= 2)
            continue;
        BadFamily fam = build_bad(ctx, sq);
        nodes[head].half_overlap = fam.half_overlap;
        for (const BadSquare& b : fam.squares) {
            auto [child, fresh] = intern(b.square, b.cls.kind);
            (void)fresh;
            nodes[head].out.push_back({child, true});
            nodes[child].alive_in += 1;
        }
        // empirical density bound: scanned squares met by a kept bad square
        for (const BadSquare& b : fam.squares) {
            Box bb = b.square.box();
            for (std::size_t t = 0; t < fam.scanned.size(); ++t) {
                const Box& p = fam.scanned[t];
                if (p.side < bb.side || !p.intersects(bb))
                    continue;
                double val = fam.scanned_mass[t] / (P.threshold_a * theta_here * p.side);
                dec.empirical_density_bound = std::max(dec.empirical_density_bound, val);
            }
        }
    }
    dec.generated_squares = (long long)nodes.size();

    // stopping-time selection: repeatedly take the largest surviving square,
    // retiring strictly finer squares it swallows; a square disappears once
    // every edge pointing at it is dead
    std::vector<std::size_t> order;
    for (;;) {
        std::size_t pick = nodes.size();
        for (std::size_t v = 0; v < nodes.size(); ++v) {
            if (nodes[v].chosen || nodes[v].alive_in == 0)
                continue;
            if (pick == nodes.size())
                pick = v;
            else {
                const DyadicSquare& a = nodes[v].sq;
                const DyadicSquare& b = nodes[pick].sq;
                if (std::tie(a.level, a.i, a.j) < std::tie(b.level, b.i, b.j))
                    pick = v;
            }
        }
        if (pick == nodes.size())
            break;
        nodes[pick].chosen = true;
        order.push_back(pick);
        Box picked = nodes[pick].sq.box();
        std::vector<std::size_t> drained;
        for (std::size_t v = 0; v < nodes.size(); ++v)
            for (auto& edge : nodes[v].out) {
                if (!edge.second)
                    continue;
                DagNode& q = nodes[edge.first];
                if (q.chosen || q.alive_in == 0)
                    continue;
                if (nodes[pick].sq.side() > nodes[v].sq.side() / 8.0)
                    continue;
                if (!picked.contains_box(q.sq.box()))
                    continue;
                edge.second = false;
                if (--q.alive_in == 0)
                    drained.push_back(edge.first);
            }
        while (!drained.empty()) {
            std::size_t s = drained.back();
            drained.pop_back();
            if (nodes[s].chosen)
                continue;
            for (auto& edge : nodes[s].out) {
                if (!edge.second)
                    continue;
                edge.second = false;
                DagNode& q = nodes[edge.first];
                if (--q.alive_in == 0 && !q.chosen)
                    drained.push_back(edge.first);
            }
        }
    }
    dec.eliminated_squares = (long long)nodes.size() - (long long)order.size();

    dec.top.reserve(order.size());
    for (std::size_t v : order) {
        TopEntry e;
        e.square = nodes[v].sq;
        e.origin = nodes[v].origin;
        e.mass = nodes[v].mass;
        e.theta = nodes[v].theta;
        e.besicovitch_overlap = nodes[v].half_overlap;
        dec.top.push_back(e);
    }

    // stop squares: maximal strictly finer top squares meeting the tripled square
    for (TopEntry& e : dec.top) {
        Box tripled = e.square.box().scaled(3.0);
        std::vector<std::size_t> cand;
        for (std::size_t t = 0; t < dec.top.size(); ++t) {
            const DyadicSquare& p = dec.top[t].square;
            if (p.side() <= e.square.side() / 8.0 && p.box().intersects(tripled))
                cand.push_back(t);
        }
        for (std::size_t a : cand) {
            bool maximal = true;
            for (std::size_t b : cand) {
                if (a == b)
                    continue;
                if (dec.top[b].square.box().contains_box(dec.top[a].square.box()) &&
                    !(dec.top[a].square == dec.top[b].square)) {
                    maximal = false;
                    break;
                }
            }
            if (maximal)
                e.stop.push_back(a);
        }
        const auto& atoms = ctx.measure().atoms();
        for (std::size_t idx : ctx.tree().atoms_in_box(tripled)) {
            bool stopped = false;
            for (std::size_t s : e.stop)
                if (dec.top[s].square.box().contains(atoms[idx].p)) {
                    stopped = true;
                    break;
                }
            if (!stopped)
                e.good_atoms.push_back(idx);
        }
    }
    return dec;
}

CoronaDecomposition build_top(const Measure& m, CoronaParams params) {
    CoronaContext ctx(m, params);
    return build_top(ctx);
}

PackingAudit packing_audit(const Measure& m, const CoronaDecomposition& d) {
    PackingAudit audit;
    KahanSum lhs;
    for (const TopEntry& e : d.top) {
        Box b = e.square.box();
        double mass = m.box_mass(b);
        double th = mass / b.side;
        lhs.add(th * th * mass);
    }
    audit.lhs = lhs.value();
    audit.curvature = c2_total(m, 0.0).value;
    audit.rhs_base = m.total_mass() + audit.curvature;
    audit.ratio = audit.rhs_base > 0.0 ? audit.lhs / audit.rhs_base : 0.0;
    return audit;
}

double stopping_scale(PlanarPoint x, const Box& root, const std::vector<Box>& stop_squares,
                      const std::vector<PlanarPoint>& good_atoms) {
    (void)root;
    double best = std::numeric_limits<double>::infinity();
    for (const Box& q : stop_squares)
        best = std::min(best, q.side + dist_to_box(x, q) / 40.0);
    for (const PlanarPoint& g : good_atoms)
        best = std::min(best, dist(x, g) / 40.0);
    return best;
}

KSetResult k_set(const CoronaContext& ctx, const CoronaDecomposition& d, std::size_t top_index) {
    if (top_index >= d.top.size())
        throw bad_input("k_set: top index out of range");
    const Measure& m = ctx.measure();
    const CoronaParams& P = ctx.params();
    const TopEntry& entry = d.top[top_index];
    Box root_box = entry.square.box();

    std::vector<Box> stop_boxes;
    stop_boxes.reserve(entry.stop.size());
    for (std::size_t s : entry.stop)
        stop_boxes.push_back(d.top[s].square.box());
    std::vector<PlanarPoint> good_points;
    good_points.reserve(entry.good_atoms.size());
    for (std::size_t idx : entry.good_atoms)
        good_points.push_back(m.atoms()[idx].p);

    KSetResult res;
    double density_cap = P.ancestor_density_factor * P.threshold_a * entry.theta;
    std::vector<std::size_t> anchors;
    for (const Box& pbox : stop_boxes) {
        auto anc = find_balanced_ancestor(m, pbox, root_box, P.balance_a, P.balance_b);
        bool keep_own = true;
        if (anc && delta(m, pbox, *anc) <= density_cap) {
            res.reference_squares.push_back(*anc);
            keep_own = false;
        } else {
            res.reference_squares.push_back(pbox);
        }
        res.ancestor_fallback.push_back(keep_own);

        std::size_t best_idx = m.size();
        double best_scale = std::numeric_limits<double>::infinity();
        for (std::size_t idx : ctx.tree().atoms_in_box(pbox.scaled(3.0))) {
            double sc = stopping_scale(m.atoms()[idx].p, root_box, stop_boxes, good_points);
            if (sc < best_scale) {
                best_scale = sc;
                best_idx = idx;
            }
        }
        // every stop square holds an atom, so its tripled box does too
        if (best_idx == m.size())
            throw precondition_error("k_set: stop square holds no atoms");
        anchors.push_back(best_idx);
        res.anchor_distance_ratio.push_back(dist_to_box(m.atoms()[best_idx].p, pbox) / pbox.side);
    }

    res.min_separation_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < anchors.size(); ++a)
        for (std::size_t b = a + 1; b < anchors.size(); ++b) {
            double dd = dist(m.atoms()[anchors[a]].p, m.atoms()[anchors[b]].p);
            double scale = std::max(stop_boxes[a].side, stop_boxes[b].side);
            res.min_separation_ratio = std::min(res.min_separation_ratio, dd / scale);
        }

    for (std::size_t idx : entry.good_atoms) {
        res.points.push_back(m.atoms()[idx].p);
        res.atom_indices.push_back(idx);
    }
    for (std::size_t idx : anchors) {
        bool seen = false;
        for (std::size_t have : res.atom_indices)
            if (have == idx) {
                seen = true;
                break;
            }
        if (!seen) {
            res.points.push_back(m.atoms()[idx].p);
            res.atom_indices.push_back(idx);
        }
    }
    return res;
}

AllocationResult allocate_on_curve(const std::vector<double>& masses,
                                   const std::vector<Box>& enlarged_squares,
                                   const Polyline& curve, double theta_bound) {
    if (masses.size() != enlarged_squares.size())
        throw bad_input("allocate_on_curve: one mass per square required");
    if (!(theta_bound > 0.0))
        throw bad_input("allocate_on_curve: density bound must be positive");
    for (double v : masses)
        if (!(v > 0.0) || !std::isfinite(v))
            throw bad_input("allocate_on_curve: masses must be positive and finite");
    for (std::size_t i = 1; i < enlarged_squares.size(); ++i)
        if (enlarged_squares[i].side < enlarged_squares[i - 1].side)
            throw precondition_error("allocate_on_curve: squares must be sorted by nondecreasing side");

    // step function on [0, length]: cuts_ and one value per gap
    std::vector<double> cuts = {0.0, curve.length()};
    std::vector<double> vals = {0.0};
    auto insert_cut = [&](double s) {
        auto it = std::lower_bound(cuts.begin(), cuts.end(), s);
        if (it != cuts.end() && *it == s)
            return;
        std::size_t k = (std::size_t)(it - cuts.begin());
        cuts.insert(it, s);
        vals.insert(vals.begin() + (k - 1), vals[k - 1]);
    };

    AllocationResult out;
    const double cap = 2.0 * theta_bound;
    for (std::size_t i = 0; i < enlarged_squares.size(); ++i) {
        auto clipped = curve.clip_to_box(enlarged_squares[i]);
        double clipped_len = 0.0;
        for (const auto& iv : clipped)
            clipped_len += iv.length();
        if (!(clipped_len > 0.0))
            throw precondition_error("allocate_on_curve: curve misses square " + std::to_string(i));

        AllocationPiece piece;
        // below-cap subintervals of the clipped region
        for (const auto& iv : clipped) {
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                double lo = std::max(iv.lo, cuts[k]);
                double hi = std::min(iv.hi, cuts[k + 1]);
                if (hi <= lo || vals[k] > cap)
                    continue;
                if (!piece.support.empty() && piece.support.back().hi == lo)
                    piece.support.back().hi = hi;
                else
                    piece.support.push_back({lo, hi});
            }
        }
        double support_len = 0.0;
        for (const auto& iv : piece.support)
            support_len += iv.length();
        if (!(support_len > 0.0)) {
            piece.fallback = true;
            piece.support = clipped;
            support_len = clipped_len;
        }
        piece.alpha = masses[i] / support_len;

        for (const auto& iv : piece.support) {
            insert_cut(iv.lo);
            insert_cut(iv.hi);
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                if (cuts[k] >= iv.lo && cuts[k + 1] <= iv.hi)
                    vals[k] += piece.alpha;
        }

        double put = piece.alpha * support_len;
        out.mass_error = std::max(out.mass_error, std::fabs(put - masses[i]) / masses[i]);
        out.max_alpha_ratio =
            std::max(out.max_alpha_ratio, piece.alpha * enlarged_squares[i].side / masses[i]);
        out.pieces.push_back(std::move(piece));
    }
    for (double v : vals)
        out.sup_density = std::max(out.sup_density, v);
    return out;
}

} // namespace curv
