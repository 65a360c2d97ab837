#pragma once

#include <cstdint>
#include <vector>

#include "maxdist/distributions.hpp"
#include "maxdist/matrix.hpp"
#include "maxdist/moments.hpp"

namespace maxdist {

// Standardized pair sum for rows (i, j): sum = sum_k eta_ijk where
// eta_ijk = (|x_ik - x_jk|^q - pair_mean_q) / sqrt(pair_var_q), so each
// eta has mean 0 and variance 1 under a correct profile.
struct PairStatistic {
    std::size_t i = 0;
    std::size_t j = 1;
    double sum = 0.0;
    double normalized = 0.0;  // sum / sqrt(n)
};

// All p(p-1)/2 pair statistics of a matrix under a profile, ordered by (i, j).
std::vector<PairStatistic> pair_statistics(const DataMatrix& matrix,
                                           const MomentProfile& profile);

enum class ChenSteinMode { ExactEnumeration, MonteCarloEstimate };

// Poisson-approximation quantities for the maximum of the normalized pair
// sums Z_(i,j) = (sum_k eta_ijk)/sqrt(n) over I = {(i,j): i < j}, with the
// neighborhoods B_(i,j) = pairs sharing a row. The threshold t is on the
// normalized (Z) scale. b3 = 0 structurally: Z_(i,j) depends only on rows i
// and j, and pairs outside the neighborhood share neither row, so the
// independence hypothesis of the bound applies exactly.
struct ChenSteinReport {
    double t = 0.0;
    double lambda = 0.0;  // sum_alpha P(Z_alpha > t) = (p(p-1)/2) P1
    double b1 = 0.0;      // (p(p-1)/2) * 2(p-2) * P1^2
    double b2 = 0.0;      // (p(p-1)/2) * 2(p-2) * P2, P2 = P(Z_12 > t, Z_13 > t)
    double b3 = 0.0;
    double bound = 0.0;  // (1 ^ lambda^-1)(b1 + b2 + b3)
    double p_max_le_t = 0.0;
    double poisson_approx = 0.0;  // exp(-lambda)
    double gap = 0.0;             // |p_max_le_t - exp(-lambda)|
    ChenSteinMode mode = ChenSteinMode::ExactEnumeration;

    // Underlying single-pair and overlapping-pair probabilities.
    double p1 = 0.0;
    double p2 = 0.0;

    // Monte Carlo standard errors (zero in exact mode): binomial errors on
    // the estimated probabilities and first-order propagated errors on the
    // derived quantities.
    std::uint64_t replications = 0;
    double se_p1 = 0.0;
    double se_p2 = 0.0;
    double se_p_max = 0.0;
    double se_gap = 0.0;
    double se_bound = 0.0;
};

// min(1, 1/lambda) * (b1 + b2 + b3); the factor is 1 when lambda == 0.
// Throws on negative input.
double chen_stein_bound(double lambda, double b1, double b2, double b3);

// Default threshold sqrt((4 - eps) ln p) with eps = 0.1, on the Z scale.
double default_chen_stein_threshold(std::size_t p, double eps = 0.1);

// Evaluates the report for i.i.d. entries from dist. Exact enumeration
// requires finite support and (support size)^(p*n) <= budget; Monte Carlo
// uses `budget` replications with common random numbers across the
// estimated probabilities. Deterministic given the seed.
ChenSteinReport chen_stein_interpoint(const DistributionSpec& dist, std::size_t p,
                                      std::size_t n, double t, ChenSteinMode mode,
                                      std::uint64_t budget, std::uint64_t seed);

// Phi(x), absolute error below 1e-12 (computed via erfc).
double std_normal_cdf(double x);

// Monte Carlo estimate of P(S_n / sqrt(n) >= x) / (1 - Phi(x)) for sums of
// `iters` standardized draws from dist (standardization is internal).
struct MdpResult {
    double ratio = 0.0;
    double p_hat = 0.0;
    double normal_tail = 0.0;  // 1 - Phi(x)
    std::uint64_t exceedances = 0;
    std::uint64_t iters = 0;
    // Set when the expected exceedance count (iters * (1 - Phi(x))) is below
    // 100, or when no exceedances occurred at all.
    bool low_count_warning = false;
};

MdpResult mdp_ratio(const DistributionSpec& dist, std::size_t n, double x,
                    std::uint64_t iters, std::uint64_t seed);

}  // namespace maxdist
