#pragma once

#include <cstddef>
#include <vector>

#include "maxdist/moments.hpp"

namespace maxdist {

// Growth regimes tying the number of sample points p to the dimension n.
// Polynomial: c1 <= p / n^tau <= c2. Exponential: p = round(exp(c n^beta))
// with beta < alpha / (2 - alpha), where alpha is the sub-Weibull tail
// exponent the entry distribution supports.
struct GrowthRegime {
    enum class Kind { Polynomial, Exponential };
    Kind kind = Kind::Polynomial;

    // Polynomial parameters.
    double tau = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;

    // Exponential parameters.
    double alpha = 0.5;
    double beta = 0.25;
    double c = 1.0;  // prefactor in exp(c n^beta)

    // Throws std::invalid_argument naming the violated inequality.
    void validate() const;
};

// M_{n,q}^q together with its law-of-the-logarithm normalization:
// z = (m_pow_q - n pair_mean_q) / sqrt(pair_var_q * n * ln p).
// Natural logarithm throughout; the limit value of z is 2.
struct LawStatistic {
    double m_pow_q = 0.0;
    std::size_t n = 0;
    std::size_t p = 0;
    double q = 2.0;
    double center = 0.0;  // n * pair_mean_q
    double scale = 0.0;   // sqrt(pair_var_q * n * ln p)
    double z = 0.0;
};

LawStatistic normalized_statistic(double m_pow_q, std::size_t n, std::size_t p,
                                  const MomentProfile& profile);

// Standard normal fast path: (m_sq - 2n) / (2 sqrt(2 n ln p)). Identical to
// normalized_statistic with the analytic N(0,1) profile at q = 2.
double gaussian_z(double m_sq, std::size_t n, std::size_t p);

// Deterministic (n, p) pairs for a regime. Polynomial: p = round(c n^tau)
// with c = sqrt(c1 c2), clamped into the integer band
// [ceil(c1 n^tau), floor(c2 n^tau)] when that band is nonempty. All p >= 2.
// n_values must be strictly increasing.
std::vector<std::pair<std::size_t, std::size_t>> regime_sequence(
    const GrowthRegime& regime, const std::vector<std::size_t>& n_values);

}  // namespace maxdist
