#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

enum class TruncationKind { none, epsilon, ell };
enum class CurvatureMethod { exact, monte_carlo };

struct CurvatureResult {
    double value = 0.0;
    TruncationKind truncation = TruncationKind::none;
    double eps = 0.0;
    long long triple_count = 0; // admissible ordered triples (exact) or samples (MC)
    CurvatureMethod method = CurvatureMethod::exact;
    long long samples = 0;
    std::uint64_t seed = 0;
    double stderr_est = 0.0;
};

struct MVIdentityReport {
    double lhs = 0.0;            // sum_i w_i |C(mu - self)(z_i)|^2
    double curvature_term = 0.0; // c2_total / 6
    double diagonal_term = 0.0;  // sum_i sum_{j!=i} w_i w_j^2 / |z_i-z_j|^2
    double residual = 0.0;
};

struct OpNormReport {
    double value = 0.0;
    int iterations_used = 0;
    double gap = 0.0; // change of the estimate over the last iteration
};

// Total curvature: sum of c(z_i,z_j,z_k)^2 w_i w_j w_k over ordered triples
// whose three pairwise distances all exceed eps (strict). Exact, O(n^3/6).
CurvatureResult c2_total(const Measure& m, double eps);

// sum over ordered pairs (j,k), j,k != i, same truncation
double c2_point(const Measure& m, std::size_t x_index, double eps);

// triple sum with x in A, y in B, z in C; not symmetrized
double c2_restricted(const Measure& m, const std::vector<std::size_t>& A,
                     const std::vector<std::size_t>& B, const std::vector<std::size_t>& C,
                     double eps);

// (K_{mu,j} f)(z_i) with kernel k_mu(x,y) = sum_z c(x,y,z)^2 w_z and the
// pair truncation |z_i - z_j'| > 2^-j
std::vector<double> k_operator(const Measure& m, int j, const std::vector<double>& f);

std::complex<double> cauchy_transform(const Measure& m, PlanarPoint z, double eps);

MVIdentityReport mv_identity_report(const Measure& m, double eps);

OpNormReport operator_norm_estimate(const Measure& m, double eps, int iterations,
                                    std::uint64_t seed);

CurvatureResult c2_monte_carlo(const Measure& m, double eps, long long samples,
                               std::uint64_t seed);

// Precomputed truncated-kernel sums for one measure: row i holds the pair
// distances to every other atom together with suffix sums of
// k_mu(z_i, z_j) w_j over atoms j sorted by distance, so any truncation
// threshold resolves with a binary search. Collinear measures short-circuit
// to zero without building anything.
class KernelCache {
public:
    explicit KernelCache(const Measure& m);

    // sum over atoms j with |z_i - z_j| > r of k_mu(z_i, z_j) w_j
    double truncated_row_sum(std::size_t i, double r) const;
    bool kernel_identically_zero() const { return zero_; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    bool zero_ = false;
    std::vector<double> d2_;     // n rows of sorted squared distances
    std::vector<double> suffix_; // matching suffix sums
};

} // namespace curv
