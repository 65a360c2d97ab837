#pragma once

#include <cstdint>
#include <string>

#include "maxdist/distributions.hpp"
#include "maxdist/matrix.hpp"

namespace maxdist {

enum class ProfileSource { Analytic, MonteCarloEstimate, SampleEstimate };

// Moments of the entry distribution and of the induced pair-distance
// variables |X1 - X2|^q. rho is the correlation between two pair distances
// sharing one point, Corr(|X1-X2|^q, |X1-X3|^q); pair_sum_var is the
// variance 2 + 2 rho of the sum of two such standardized variables.
struct MomentProfile {
    double mu = 0.0;
    double sigma2 = 1.0;
    double m2 = 1.0;  // E|X - mu|^2
    double m4 = 3.0;  // E|X - mu|^4
    double q = 2.0;
    double pair_mean_q = 2.0;  // E|X1 - X2|^q
    double pair_var_q = 8.0;   // Var(|X1 - X2|^q)
    double rho = 0.25;
    double pair_sum_var = 2.5;  // 2 + 2 rho
    ProfileSource source = ProfileSource::Analytic;

    // Standard errors; zero for analytic profiles. Monte Carlo estimates
    // carry jackknife-over-shards errors so "within 3 standard errors"
    // statements are checkable.
    double se_pair_mean_q = 0.0;
    double se_pair_var_q = 0.0;
    double se_rho = 0.0;
    double se_m4 = 0.0;

    std::string warning;  // non-empty when a precondition was soft-violated
};

// Admissibility report. passes is the strict condition rho < 1/3 at the
// profile's q. rho_q2 restates the correlation at q = 2 from the entry
// moments, (m4 - m2^2)/(2(m4 + m2^2)); at q = 2 the two coincide and
// passes == equivalent_passes == (m4 < 5 m2^2).
struct ConditionReport {
    double rho = 0.0;
    bool passes = false;
    double kurtosis_ratio = 0.0;  // m4 / m2^2
    bool equivalent_passes = false;
    double rho_q2 = 0.0;
    // Moment order required by the polynomial-regime hypotheses at this
    // profile's q and the given tau: q (4 tau + 4). Finiteness is declared
    // from the distribution family, never inferred from data; every
    // built-in family has all polynomial moments finite.
    double moment_order_checked = 0.0;
};

// Exact profile of N(0,1) entries at q = 2; Monte Carlo fallback for other
// q (1e6 triples, fixed internal seed).
MomentProfile gaussian_profile(double q);

// Closed-form q = 2 profile for any built-in family with positive variance.
// Pair moments follow from the centered entry moments: pair_mean = 2 m2,
// pair_var = 2 (m4 + m2^2), rho = (m4 - m2^2)/(2 (m4 + m2^2)).
MomentProfile analytic_profile(const DistributionSpec& dist, double q);

// Plug-in estimation from sampled i.i.d. triples (X1, X2, X3). Deterministic
// given the seed; sharded internally with order-independent merges.
MomentProfile profile_from_sampler(const DistributionSpec& dist, double q,
                                   std::size_t samples, std::uint64_t seed);

// Treats all p*n entries of the matrix as one i.i.d. sample. Pair moments
// via the q = 2 closed forms when q == 2, otherwise via triples resampled
// from the empirical distribution with a fixed documented seed.
MomentProfile profile_from_data(const DataMatrix& matrix, double q);

ConditionReport check_condition(const MomentProfile& profile);
ConditionReport check_condition(const MomentProfile& profile, double tau);

}  // namespace maxdist
