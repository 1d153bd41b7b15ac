#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace curv {

// Neumaier variant of compensated summation. Accumulation order still
// matters for bit reproducibility, so callers feed terms in a canonical
// order (input order, or sorted when the order is not already fixed).
class KahanSum {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::fabs(s_) >= std::fabs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    void add(const KahanSum& o) {
        add(o.s_);
        add(o.c_);
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Deterministic parallel reduction: fixed-size blocks reduced
// independently (parallelizable), then combined serially in block order.
// The result does not depend on the number of threads.
inline constexpr std::size_t kSumBlock = 4096;

template <typename F>
double blocked_sum(std::size_t n, F&& term) {
    std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<KahanSum> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < (long long)nblocks; ++b) {
        std::size_t lo = (std::size_t)b * kSumBlock;
        std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
        KahanSum acc;
        for (std::size_t i = lo; i < hi; ++i)
            acc.add(term(i));
        partial[(std::size_t)b] = acc;
    }
    KahanSum total;
    for (const KahanSum& p : partial)
        total.add(p);
    return total.value();
}

} // namespace curv
