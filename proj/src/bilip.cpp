#include "curv/bilip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "curv/errors.hpp"
#include "curv/rng.hpp"

namespace curv {

namespace {

double parse_double(const std::string& tok, const std::string& ctx) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v))
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw bad_input("map spec: bad number '" + tok + "' in " + ctx);
    }
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// larger singular value of [[1,0],[s,1]]
double unit_shear_norm(double s) {
    double m = std::fabs(s);
    return std::sqrt((m * m + 2.0 + m * std::sqrt(m * m + 4.0)) / 2.0);
}

} // namespace

PlaneMap PlaneMap::affine(double a, double b, double c, double d, double tx, double ty) {
    if (a * d - b * c == 0.0)
        throw bad_input("affine map: matrix is singular");
    for (double v : {a, b, c, d, tx, ty})
        if (!std::isfinite(v))
            throw bad_input("affine map: non-finite coefficient");
    PlaneMap f;
    Stage s;
    s.kind = MapKind::affine;
    s.a = a;
    s.b = b;
    s.c = c;
    s.d = d;
    s.tx = tx;
    s.ty = ty;
    f.stages_.push_back(std::move(s));
    return f;
}

PlaneMap PlaneMap::shear(double lambda) {
    if (!(lambda != 0.0) || !std::isfinite(lambda))
        throw bad_input("shear map: factor must be nonzero and finite");
    PlaneMap f;
    Stage s;
    s.kind = MapKind::shear;
    s.lambda = lambda;
    f.stages_.push_back(std::move(s));
    return f;
}

PlaneMap PlaneMap::graph_shift(std::vector<PlanarPoint> breakpoints) {
    if (breakpoints.empty())
        throw bad_input("graph map: needs at least one breakpoint");
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        if (!std::isfinite(breakpoints[k].x) || !std::isfinite(breakpoints[k].y))
            throw bad_input("graph map: non-finite breakpoint");
        if (k > 0 && !(breakpoints[k].x > breakpoints[k - 1].x))
            throw bad_input("graph map: breakpoint x values must increase");
    }
    PlaneMap f;
    Stage s;
    s.kind = MapKind::graph_shift;
    s.bps = std::move(breakpoints);
    f.stages_.push_back(std::move(s));
    return f;
}

PlaneMap PlaneMap::split_translate() {
    PlaneMap f;
    Stage s;
    s.kind = MapKind::split_translate;
    f.stages_.push_back(std::move(s));
    return f;
}

PlaneMap PlaneMap::compose(std::vector<PlaneMap> stages) {
    if (stages.empty())
        throw bad_input("compose: needs at least one stage");
    PlaneMap f;
    for (PlaneMap& g : stages)
        for (Stage& s : g.stages_)
            f.stages_.push_back(std::move(s));
    return f;
}

PlaneMap::Stage PlaneMap::parse_stage(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "affine") {
        auto toks = split_on(args, ',');
        if (toks.size() != 6)
            throw bad_input("map spec: affine needs 6 numbers, got '" + args + "'");
        double v[6];
        for (int k = 0; k < 6; ++k)
            v[k] = parse_double(toks[k], "affine");
        return affine(v[0], v[1], v[2], v[3], v[4], v[5]).stages_[0];
    }
    if (head == "shear") {
        if (args.empty())
            throw bad_input("map spec: shear needs a factor");
        return shear(parse_double(args, "shear")).stages_[0];
    }
    if (head == "graph") {
        std::vector<PlanarPoint> bps;
        for (const std::string& pair : split_on(args, ';')) {
            auto xy = split_on(pair, ',');
            if (xy.size() != 2)
                throw bad_input("map spec: graph breakpoint '" + pair + "' is not x,y");
            bps.push_back({parse_double(xy[0], "graph"), parse_double(xy[1], "graph")});
        }
        return graph_shift(std::move(bps)).stages_[0];
    }
    if (head == "split") {
        if (!args.empty())
            throw bad_input("map spec: split takes no arguments");
        return split_translate().stages_[0];
    }
    throw bad_input("map spec: unknown kind '" + head + "'");
}

PlaneMap PlaneMap::parse(const std::string& spec) {
    if (spec.rfind("compose:", 0) == 0) {
        PlaneMap f;
        auto parts = split_on(spec.substr(8), '+');
        if (parts.empty() || (parts.size() == 1 && parts[0].empty()))
            throw bad_input("map spec: compose needs stages");
        for (const std::string& part : parts)
            f.stages_.push_back(parse_stage(part));
        return f;
    }
    PlaneMap f;
    f.stages_.push_back(parse_stage(spec));
    return f;
}

PlanarPoint PlaneMap::apply_stage(const Stage& s, PlanarPoint p) {
    switch (s.kind) {
    case MapKind::affine:
        return {s.a * p.x + s.b * p.y + s.tx, s.c * p.x + s.d * p.y + s.ty};
    case MapKind::shear:
        return {p.x, s.lambda * p.y};
    case MapKind::graph_shift: {
        const auto& bp = s.bps;
        double shift;
        if (p.x <= bp.front().x) {
            shift = bp.front().y;
        } else if (p.x >= bp.back().x) {
            shift = bp.back().y;
        } else {
            std::size_t hi = 1;
            while (bp[hi].x < p.x)
                ++hi;
            double t = (p.x - bp[hi - 1].x) / (bp[hi].x - bp[hi - 1].x);
            shift = bp[hi - 1].y + t * (bp[hi].y - bp[hi - 1].y);
        }
        return {p.x, p.y + shift};
    }
    case MapKind::split_translate:
        return p.x < 0.0 ? PlanarPoint{p.x, p.y + 1.0} : p;
    default:
        return p;
    }
}

PlanarPoint PlaneMap::operator()(PlanarPoint p) const {
    for (const Stage& s : stages_)
        p = apply_stage(s, p);
    return p;
}

MapKind PlaneMap::kind() const {
    return stages_.size() > 1 ? MapKind::composition : stages_[0].kind;
}

double PlaneMap::stage_bound(const Stage& s) {
    switch (s.kind) {
    case MapKind::affine: {
        double q1 = s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d;
        double det = s.a * s.d - s.b * s.c;
        double disc = std::max(q1 * q1 - 4.0 * det * det, 0.0);
        double s1 = std::sqrt((q1 + std::sqrt(disc)) / 2.0);
        double s2 = std::fabs(det) / s1;
        return std::max(s1, 1.0 / s2);
    }
    case MapKind::shear: {
        double m = std::fabs(s.lambda);
        return std::max({m, 1.0 / m, 1.0});
    }
    case MapKind::graph_shift: {
        double worst = 1.0;
        for (std::size_t k = 1; k < s.bps.size(); ++k) {
            double slope = (s.bps[k].y - s.bps[k - 1].y) / (s.bps[k].x - s.bps[k - 1].x);
            worst = std::max(worst, unit_shear_norm(slope));
        }
        return worst;
    }
    case MapKind::split_translate:
    default:
        return std::numeric_limits<double>::infinity();
    }
}

double PlaneMap::declared_bilip() const {
    double prod = 1.0;
    for (const Stage& s : stages_)
        prod *= stage_bound(s);
    return prod;
}

bool PlaneMap::not_bilipschitz() const {
    for (const Stage& s : stages_)
        if (s.kind == MapKind::split_translate)
            return true;
    return false;
}

std::string PlaneMap::stage_spec(const Stage& s) {
    switch (s.kind) {
    case MapKind::affine:
        return "affine:" + format_double(s.a) + "," + format_double(s.b) + "," +
               format_double(s.c) + "," + format_double(s.d) + "," + format_double(s.tx) + "," +
               format_double(s.ty);
    case MapKind::shear:
        return "shear:" + format_double(s.lambda);
    case MapKind::graph_shift: {
        std::string out = "graph:";
        for (std::size_t k = 0; k < s.bps.size(); ++k) {
            if (k)
                out += ";";
            out += format_double(s.bps[k].x) + "," + format_double(s.bps[k].y);
        }
        return out;
    }
    case MapKind::split_translate:
    default:
        return "split";
    }
}

std::string PlaneMap::describe() const {
    if (stages_.size() == 1)
        return stage_spec(stages_[0]);
    std::string out = "compose:";
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        if (k)
            out += "+";
        out += stage_spec(stages_[k]);
    }
    return out;
}

Measure pushforward(const PlaneMap& f, const Measure& m) {
    std::vector<Atom> atoms;
    atoms.reserve(m.size());
    for (const Atom& a : m.atoms())
        atoms.push_back({f(a.p), a.w});
    return Measure(std::move(atoms), m.name().empty() ? "pushforward" : m.name() + "/push");
}

BilipEstimate empirical_bilip(const PlaneMap& f, const Measure& m, long long pairs,
                              std::uint64_t seed) {
    if (m.size() < 2)
        throw bad_input("empirical_bilip: need at least 2 atoms");
    BilipEstimate est;
    est.lower = std::numeric_limits<double>::infinity();
    std::size_t n = m.size();
    for (long long t = 0; t < pairs; ++t) {
        std::uint64_t u = counter_u64(seed, (std::uint64_t)t);
        std::size_t i = (std::size_t)(u % n);
        std::size_t j = (std::size_t)(splitmix64(u) % (n - 1));
        if (j >= i)
            ++j;
        const PlanarPoint& p = m.atoms()[i].p;
        const PlanarPoint& q = m.atoms()[j].p;
        double d0 = dist(p, q);
        if (d0 == 0.0)
            continue;
        double d1 = dist(f(p), f(q));
        double r = d1 / d0;
        est.lower = std::min(est.lower, r);
        est.upper = std::max(est.upper, r);
        est.pairs_used += 1;
    }
    if (est.pairs_used == 0)
        est.lower = 0.0;
    return est;
}

TransportReport transport_experiment(const PlaneMap& f, const Measure& m,
                                     std::size_t exact_cutoff, long long mc_samples,
                                     std::uint64_t seed, long long bilip_pairs) {
    TransportReport rep;
    rep.mass = m.total_mass();
    Measure mapped = pushforward(f, m);
    if (m.size() <= exact_cutoff) {
        rep.before = c2_total(m, 0.0);
        rep.after = c2_total(mapped, 0.0);
    } else {
        // same seed on both sides: the estimators share their triple draws
        rep.before = c2_monte_carlo(m, 0.0, mc_samples, seed);
        rep.after = c2_monte_carlo(mapped, 0.0, mc_samples, seed);
    }
    rep.ratio = rep.after.value / (rep.mass + rep.before.value);
    rep.empirical = empirical_bilip(f, m, bilip_pairs, seed);
    rep.declared_bilip = f.declared_bilip();
    rep.not_bilipschitz = f.not_bilipschitz();
    return rep;
}

CapacityRatioReport capacity_ratio_experiment(const PlaneMap& f,
                                              const std::vector<PlanarPoint>& support,
                                              const CapacityParams& params) {
    CapacityRatioReport rep;
    rep.before = estimate_gamma(support, params);
    std::vector<PlanarPoint> mapped;
    mapped.reserve(support.size());
    for (const PlanarPoint& p : support)
        mapped.push_back(f(p));
    rep.after = estimate_gamma(mapped, params);
    rep.ratio = rep.before.value > 0.0 ? rep.after.value / rep.before.value : 0.0;
    rep.declared_bilip = f.declared_bilip();
    rep.not_bilipschitz = f.not_bilipschitz();
    return rep;
}

} // namespace curv
