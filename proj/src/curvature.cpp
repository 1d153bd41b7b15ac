#include "curv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curv/ksum.hpp"
#include "curv/menger.hpp"
#include "curv/rng.hpp"

namespace curv {

namespace {

// atoms in lexicographic (x, y, w, index) order; makes triple sums
// independent of the input atom order, bit for bit
struct SortedView {
    std::vector<double> xs, ys, ws;
};

SortedView sorted_view(const Measure& m) {
    std::size_t n = m.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const auto& atoms = m.atoms();
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Atom& u = atoms[a];
        const Atom& v = atoms[b];
        if (u.p.x != v.p.x)
            return u.p.x < v.p.x;
        if (u.p.y != v.p.y)
            return u.p.y < v.p.y;
        if (u.w != v.w)
            return u.w < v.w;
        return a < b;
    });
    SortedView sv;
    sv.xs.resize(n);
    sv.ys.resize(n);
    sv.ws.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        sv.xs[t] = atoms[idx[t]].p.x;
        sv.ys[t] = atoms[idx[t]].p.y;
        sv.ws[t] = atoms[idx[t]].w;
    }
    return sv;
}

constexpr double kDenFloor = 1e-300;

// inner loop over the third point; separate accumulator lanes keep the
// combining order fixed while still vectorizing
inline void third_point_sum(const double* xs, const double* ys, const double* ws,
                            std::size_t k0, std::size_t n, double xi, double yi,
                            double xj, double yj, double ux, double uy, double d2ij,
                            double e2, double& value_out, double& count_out) {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    double cnt[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t k = k0;
    for (; k + 8 <= n; k += 8) {
        for (int l = 0; l < 8; ++l) {
            std::size_t kk = k + (std::size_t)l;
            double dxi = xs[kk] - xi, dyi = ys[kk] - yi;
            double dxj = xs[kk] - xj, dyj = ys[kk] - yj;
            double dik2 = dxi * dxi + dyi * dyi;
            double djk2 = dxj * dxj + dyj * dyj;
            bool adm = (dik2 > e2) & (djk2 > e2);
            double den = d2ij * dik2 * djk2;
            double cr = cross2(ux, uy, dxi, dyi);
            double t = (adm && den >= kDenFloor) ? 4.0 * (cr * cr) / den * ws[kk] : 0.0;
            acc[l] += t;
            cnt[l] += adm ? 1.0 : 0.0;
        }
    }
    for (; k < n; ++k) {
        double dxi = xs[k] - xi, dyi = ys[k] - yi;
        double dxj = xs[k] - xj, dyj = ys[k] - yj;
        double dik2 = dxi * dxi + dyi * dyi;
        double djk2 = dxj * dxj + dyj * dyj;
        bool adm = (dik2 > e2) & (djk2 > e2);
        double den = d2ij * dik2 * djk2;
        double cr = cross2(ux, uy, dxi, dyi);
        acc[0] += (adm && den >= kDenFloor) ? 4.0 * (cr * cr) / den * ws[k] : 0.0;
        cnt[0] += adm ? 1.0 : 0.0;
    }
    value_out = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    count_out = ((cnt[0] + cnt[1]) + (cnt[2] + cnt[3])) + ((cnt[4] + cnt[5]) + (cnt[6] + cnt[7]));
}

} // namespace

CurvatureResult c2_total(const Measure& m, double eps) {
    if (eps < 0.0 || !std::isfinite(eps))
        throw bad_input("c2_total: truncation must be a nonnegative finite number");
    CurvatureResult res;
    res.truncation = eps > 0.0 ? TruncationKind::epsilon : TruncationKind::none;
    res.eps = eps;
    res.method = CurvatureMethod::exact;
    std::size_t n = m.size();
    if (n < 3)
        return res;
    SortedView v = sorted_view(m);
    const double* xs = v.xs.data();
    const double* ys = v.ys.data();
    const double* ws = v.ws.data();
    double e2 = eps * eps;
    std::vector<double> S(n, 0.0), C(n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long li = 0; li < (long long)n; ++li) {
        std::size_t i = (std::size_t)li;
        KahanSum si;
        double ci = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double ux = xs[j] - xs[i], uy = ys[j] - ys[i];
            double d2ij = ux * ux + uy * uy;
            if (!(d2ij > e2))
                continue;
            double inner = 0.0, icnt = 0.0;
            third_point_sum(xs, ys, ws, j + 1, n, xs[i], ys[i], xs[j], ys[j], ux, uy,
                            d2ij, e2, inner, icnt);
            si.add(ws[i] * ws[j] * inner);
            ci += icnt;
        }
        S[i] = si.value();
        C[i] = ci;
    }
    KahanSum total;
    double count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total.add(S[i]);
        count += C[i];
    }
    res.value = 6.0 * total.value();
    res.triple_count = (long long)std::llround(6.0 * count);
    return res;
}

double c2_point(const Measure& m, std::size_t x_index, double eps) {
    if (x_index >= m.size())
        throw bad_input("c2_point: atom index out of range");
    if (eps < 0.0 || !std::isfinite(eps))
        throw bad_input("c2_point: truncation must be a nonnegative finite number");
    std::size_t n = m.size();
    const double* xs = m.xs();
    const double* ys = m.ys();
    const double* ws = m.ws();
    double e2 = eps * eps;
    double xi = xs[x_index], yi = ys[x_index];
    KahanSum sum;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == x_index)
            continue;
        double uxj = xs[j] - xi, uyj = ys[j] - yi;
        double d2j = uxj * uxj + uyj * uyj;
        if (!(d2j > e2))
            continue;
        KahanSum inner;
        for (std::size_t k = j + 1; k < n; ++k) {
            if (k == x_index)
                continue;
            double uxk = xs[k] - xi, uyk = ys[k] - yi;
            double d2k = uxk * uxk + uyk * uyk;
            double dxjk = xs[k] - xs[j], dyjk = ys[k] - ys[j];
            double d2jk = dxjk * dxjk + dyjk * dyjk;
            if (!(d2k > e2) || !(d2jk > e2))
                continue;
            inner.add(menger_curvature_sq({xi, yi}, {xs[j], ys[j]}, {xs[k], ys[k]}) *
                      ws[j] * ws[k]);
        }
        sum.add(inner.value());
    }
    return 2.0 * sum.value();
}

double c2_restricted(const Measure& m, const std::vector<std::size_t>& A,
                     const std::vector<std::size_t>& B, const std::vector<std::size_t>& C,
                     double eps) {
    std::size_t n = m.size();
    for (std::size_t t : A)
        if (t >= n)
            throw bad_input("c2_restricted: index out of range in first set");
    for (std::size_t t : B)
        if (t >= n)
            throw bad_input("c2_restricted: index out of range in second set");
    for (std::size_t t : C)
        if (t >= n)
            throw bad_input("c2_restricted: index out of range in third set");
    const auto& atoms = m.atoms();
    double e2 = eps * eps;
    KahanSum sum;
    for (std::size_t a : A) {
        KahanSum mid;
        for (std::size_t b : B) {
            if (!(dist2(atoms[a].p, atoms[b].p) > e2))
                continue;
            KahanSum inner;
            for (std::size_t c : C) {
                if (!(dist2(atoms[a].p, atoms[c].p) > e2) ||
                    !(dist2(atoms[b].p, atoms[c].p) > e2))
                    continue;
                inner.add(menger_curvature_sq(atoms[a].p, atoms[b].p, atoms[c].p) * atoms[c].w);
            }
            mid.add(atoms[b].w * inner.value());
        }
        sum.add(atoms[a].w * mid.value());
    }
    return sum.value();
}

std::vector<double> k_operator(const Measure& m, int j, const std::vector<double>& f) {
    std::size_t n = m.size();
    if (f.size() != n)
        throw bad_input("k_operator: vector length does not match atom count");
    double r = std::ldexp(1.0, -j);
    double r2 = r * r;
    const double* xs = m.xs();
    const double* ys = m.ys();
    const double* ws = m.ws();
    std::vector<double> out(n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long li = 0; li < (long long)n; ++li) {
        std::size_t i = (std::size_t)li;
        KahanSum row;
        for (std::size_t p = 0; p < n; ++p) {
            double ux = xs[p] - xs[i], uy = ys[p] - ys[i];
            double d2 = ux * ux + uy * uy;
            if (!(d2 > r2))
                continue;
            // k_mu(z_i, z_p) = sum over z of c^2 w_z
            double kv = 0.0;
            double acc[4] = {0, 0, 0, 0};
            for (std::size_t z = 0; z < n; ++z) {
                double vx = xs[z] - xs[i], vy = ys[z] - ys[i];
                double a2 = vx * vx + vy * vy;
                double wx = xs[z] - xs[p], wy = ys[z] - ys[p];
                double b2 = wx * wx + wy * wy;
                double den = d2 * a2 * b2;
                double cr = cross2(ux, uy, vx, vy);
                acc[z % 4] += den >= kDenFloor ? 4.0 * (cr * cr) / den * ws[z] : 0.0;
            }
            kv = (acc[0] + acc[1]) + (acc[2] + acc[3]);
            row.add(kv * f[p] * ws[p]);
        }
        out[i] = row.value();
    }
    return out;
}

std::complex<double> cauchy_transform(const Measure& m, PlanarPoint z, double eps) {
    if (eps < 0.0)
        throw bad_input("cauchy_transform: truncation must be nonnegative");
    double e2 = eps * eps;
    KahanSum re, im;
    for (const Atom& a : m.atoms()) {
        double dx = a.p.x - z.x, dy = a.p.y - z.y;
        double d2 = dx * dx + dy * dy;
        if (!(d2 > e2))
            continue;
        // w / (xi - z) = w * conj(xi - z) / |xi - z|^2
        re.add(a.w * dx / d2);
        im.add(-a.w * dy / d2);
    }
    return {re.value(), im.value()};
}

MVIdentityReport mv_identity_report(const Measure& m, double eps) {
    if (eps < 0.0 || !std::isfinite(eps))
        throw bad_input("mv_identity_report: truncation must be nonnegative and finite");
    std::size_t n = m.size();
    // the identity needs the truncation strictly below every pair distance,
    // coincident atoms included (they make it fail outright)
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            min_d2 = std::min(min_d2, dist2(m.atoms()[i].p, m.atoms()[j].p));
    if (n >= 2 && !(eps * eps < min_d2))
        throw precondition_error("mv_identity_report: truncation is not below the minimum pairwise atom distance");
    const double* xs = m.xs();
    const double* ys = m.ys();
    const double* ws = m.ws();
    std::vector<double> lhs_i(n, 0.0), diag_i(n, 0.0);
#pragma omp parallel for schedule(static)
    for (long long li = 0; li < (long long)n; ++li) {
        std::size_t i = (std::size_t)li;
        KahanSum re, im, diag;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
            double d2 = dx * dx + dy * dy;
            re.add(ws[j] * dx / d2);
            im.add(-ws[j] * dy / d2);
            diag.add(ws[i] * ws[j] * ws[j] / d2);
        }
        double r = re.value(), q = im.value();
        lhs_i[i] = ws[i] * (r * r + q * q);
        diag_i[i] = diag.value();
    }
    MVIdentityReport rep;
    KahanSum lhs, diag;
    for (std::size_t i = 0; i < n; ++i) {
        lhs.add(lhs_i[i]);
        diag.add(diag_i[i]);
    }
    rep.lhs = lhs.value();
    rep.curvature_term = c2_total(m, eps).value / 6.0;
    rep.diagonal_term = diag.value();
    rep.residual = rep.lhs - rep.curvature_term - rep.diagonal_term;
    return rep;
}

OpNormReport operator_norm_estimate(const Measure& m, double eps, int iterations,
                                    std::uint64_t seed) {
    if (iterations < 1)
        throw bad_input("operator_norm_estimate: need at least one iteration");
    if (eps < 0.0)
        throw bad_input("operator_norm_estimate: truncation must be nonnegative");
    std::size_t n = m.size();
    OpNormReport rep;
    if (n < 2)
        return rep;
    const double* xs = m.xs();
    const double* ys = m.ys();
    const double* ws = m.ws();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = std::sqrt(ws[i]);
    double e2 = eps * eps;
    std::vector<std::complex<double>> u(n), mu(n), v(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = {counter_double(seed, 2 * i) - 0.5, counter_double(seed, 2 * i + 1) - 0.5};
    auto normalize = [&](std::vector<std::complex<double>>& w) {
        double s = 0.0;
        for (const auto& c : w)
            s += std::norm(c);
        s = std::sqrt(s);
        if (s == 0.0) {
            w[0] = 1.0;
            return;
        }
        for (auto& c : w)
            c /= s;
    };
    auto apply = [&](const std::vector<std::complex<double>>& in,
                     std::vector<std::complex<double>>& out, bool adjoint) {
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
                double d2 = dx * dx + dy * dy;
                if (!(d2 > e2))
                    continue;
                // M_ij = sq_i sq_j / (z_j - z_i); adjoint flips the sign of
                // the imaginary part
                double re = dx / d2, im = -dy / d2;
                if (adjoint)
                    im = -im;
                acc += std::complex<double>(re, im) * (sq[j] * in[j]);
            }
            out[i] = sq[i] * acc;
        }
    };
    normalize(u);
    double prev = 0.0;
    for (int t = 0; t < iterations; ++t) {
        apply(u, mu, false);
        double s = 0.0;
        for (const auto& c : mu)
            s += std::norm(c);
        double sigma = std::sqrt(s);
        rep.gap = std::fabs(sigma - prev);
        rep.value = sigma;
        rep.iterations_used = t + 1;
        if (t > 0 && rep.gap <= 1e-13 * std::max(1.0, sigma))
            break;
        prev = sigma;
        apply(mu, v, true);
        u.swap(v);
        normalize(u);
    }
    return rep;
}

CurvatureResult c2_monte_carlo(const Measure& m, double eps, long long samples,
                               std::uint64_t seed) {
    if (samples < 1)
        throw bad_input("c2_monte_carlo: need at least one sample");
    if (eps < 0.0 || !std::isfinite(eps))
        throw bad_input("c2_monte_carlo: truncation must be a nonnegative finite number");
    CurvatureResult res;
    res.truncation = eps > 0.0 ? TruncationKind::epsilon : TruncationKind::none;
    res.eps = eps;
    res.method = CurvatureMethod::monte_carlo;
    res.samples = samples;
    res.seed = seed;
    std::size_t n = m.size();
    if (n < 3)
        return res;
    const auto& atoms = m.atoms();
    double scale = (double)n * (double)n * (double)n;
    double e2 = eps * eps;
    long long admissible = 0;
    KahanSum sum, sumsq;
    std::vector<double> block_sum((std::size_t)((samples + 65535) / 65536), 0.0);
    std::vector<double> block_sq(block_sum.size(), 0.0);
    std::vector<long long> block_adm(block_sum.size(), 0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < (long long)block_sum.size(); ++b) {
        long long lo = b * 65536;
        long long hi = std::min(samples, lo + 65536);
        KahanSum bs, bq;
        long long ba = 0;
        for (long long t = lo; t < hi; ++t) {
            std::uint64_t h = counter_u64(seed, (std::uint64_t)t);
            std::size_t i = (std::size_t)(h % n);
            std::size_t j = (std::size_t)((h / n) % n);
            std::size_t k = (std::size_t)((h / n / n) % n);
            const PlanarPoint& a = atoms[i].p;
            const PlanarPoint& bb = atoms[j].p;
            const PlanarPoint& c = atoms[k].p;
            double term = 0.0;
            if (dist2(a, bb) > e2 && dist2(a, c) > e2 && dist2(bb, c) > e2) {
                ++ba;
                term = menger_curvature_sq(a, bb, c) * atoms[i].w * atoms[j].w * atoms[k].w * scale;
            }
            bs.add(term);
            bq.add(term * term);
        }
        block_sum[(std::size_t)b] = bs.value();
        block_sq[(std::size_t)b] = bq.value();
        block_adm[(std::size_t)b] = ba;
    }
    for (std::size_t b = 0; b < block_sum.size(); ++b) {
        sum.add(block_sum[b]);
        sumsq.add(block_sq[b]);
        admissible += block_adm[b];
    }
    double mean = sum.value() / (double)samples;
    res.value = mean;
    res.triple_count = admissible;
    if (samples > 1) {
        double var = (sumsq.value() - (double)samples * mean * mean) / (double)(samples - 1);
        res.stderr_est = std::sqrt(std::max(0.0, var) / (double)samples);
    }
    return res;
}

KernelCache::KernelCache(const Measure& m) : n_(m.size()) {
    if (m.collinear()) {
        zero_ = true;
        return;
    }
    if (n_ > 6000)
        throw precondition_error("kernel cache: measure too large for the dense kernel (over 6000 atoms)");
    const double* xs = m.xs();
    const double* ys = m.ys();
    const double* ws = m.ws();
    std::size_t n = n_;
    // full symmetric kernel matrix first: the z sums cost n per pair, so
    // sharing K_ij = K_ji halves the dominant work
    std::vector<double> K(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long li = 0; li < (long long)n; ++li) {
        std::size_t i = (std::size_t)li;
        double xi = xs[i], yi = ys[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            double ux = xs[j] - xi, uy = ys[j] - yi;
            double d2ij = ux * ux + uy * uy;
            if (d2ij == 0.0)
                continue;
            double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            std::size_t z = 0;
            for (; z + 8 <= n; z += 8) {
                for (int l = 0; l < 8; ++l) {
                    std::size_t zz = z + (std::size_t)l;
                    double vx = xs[zz] - xi, vy = ys[zz] - yi;
                    double a2 = vx * vx + vy * vy;
                    double wx = xs[zz] - xs[j], wy = ys[zz] - ys[j];
                    double b2 = wx * wx + wy * wy;
                    double den = d2ij * a2 * b2;
                    double cr = cross2(ux, uy, vx, vy);
                    acc[l] += den >= kDenFloor ? 4.0 * (cr * cr) / den * ws[zz] : 0.0;
                }
            }
            for (; z < n; ++z) {
                double vx = xs[z] - xi, vy = ys[z] - yi;
                double a2 = vx * vx + vy * vy;
                double wx = xs[z] - xs[j], wy = ys[z] - ys[j];
                double b2 = wx * wx + wy * wy;
                double den = d2ij * a2 * b2;
                double cr = cross2(ux, uy, vx, vy);
                acc[0] += den >= kDenFloor ? 4.0 * (cr * cr) / den * ws[z] : 0.0;
            }
            double kv = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
                        ((acc[4] + acc[5]) + (acc[6] + acc[7]));
            K[i * n + j] = kv;
            K[j * n + i] = kv;
        }
    }
    d2_.assign(n * n, 0.0);
    suffix_.assign(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long li = 0; li < (long long)n; ++li) {
        std::size_t i = (std::size_t)li;
        std::vector<std::pair<double, std::size_t>> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
            row[j] = {dx * dx + dy * dy, j};
        }
        std::sort(row.begin(), row.end());
        KahanSum tail;
        for (std::size_t t = n; t-- > 0;) {
            tail.add(K[i * n + row[t].second] * ws[row[t].second]);
            d2_[i * n + t] = row[t].first;
            suffix_[i * n + t] = tail.value();
        }
    }
}

double KernelCache::truncated_row_sum(std::size_t i, double r) const {
    if (zero_)
        return 0.0;
    if (i >= n_)
        throw bad_input("kernel cache: atom index out of range");
    double r2 = r * r;
    const double* row = d2_.data() + i * n_;
    const double* suf = suffix_.data() + i * n_;
    std::size_t lo = (std::size_t)(std::upper_bound(row, row + n_, r2) - row);
    return lo < n_ ? suf[lo] : 0.0;
}

} // namespace curv
