#include "maxdist/law.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maxdist {

void GrowthRegime::validate() const {
    if (kind == Kind::Polynomial) {
        if (!(tau > 0.0)) throw std::invalid_argument("regime: violated tau > 0");
        if (!(c1 > 0.0)) throw std::invalid_argument("regime: violated c1 > 0");
        if (!(c1 <= c2)) throw std::invalid_argument("regime: violated c1 <= c2");
        return;
    }
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw std::invalid_argument("regime: violated alpha in (0, 1/2]");
    }
    if (!(beta > 0.0)) throw std::invalid_argument("regime: violated beta > 0");
    if (!(c > 0.0)) throw std::invalid_argument("regime: violated c > 0");
    const double limit = alpha / (2.0 - alpha);
    if (!(beta < limit)) {
        throw std::invalid_argument("regime: violated beta < alpha/(2-alpha) = " +
                                    std::to_string(limit));
    }
}

LawStatistic normalized_statistic(double m_pow_q, std::size_t n, std::size_t p,
                                  const MomentProfile& profile) {
    if (n == 0) throw std::invalid_argument("law: n must be positive");
    if (p < 2) throw std::invalid_argument("law: p must be at least 2 (ln p > 0)");
    if (!(profile.pair_var_q > 0.0)) {
        throw std::invalid_argument("law: profile pair_var_q must be positive");
    }
    LawStatistic stat;
    stat.m_pow_q = m_pow_q;
    stat.n = n;
    stat.p = p;
    stat.q = profile.q;
    stat.center = double(n) * profile.pair_mean_q;
    stat.scale = std::sqrt(profile.pair_var_q * double(n) * std::log(double(p)));
    stat.z = (m_pow_q - stat.center) / stat.scale;
    return stat;
}

double gaussian_z(double m_sq, std::size_t n, std::size_t p) {
    if (n == 0) throw std::invalid_argument("law: n must be positive");
    if (p < 2) throw std::invalid_argument("law: p must be at least 2 (ln p > 0)");
    return (m_sq - 2.0 * double(n)) / (2.0 * std::sqrt(2.0 * double(n) * std::log(double(p))));
}

std::vector<std::pair<std::size_t, std::size_t>> regime_sequence(
    const GrowthRegime& regime, const std::vector<std::size_t>& n_values) {
    regime.validate();
    if (n_values.empty()) throw std::invalid_argument("regime: n values must be nonempty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] == 0) throw std::invalid_argument("regime: n values must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1]) {
            throw std::invalid_argument("regime: n values must be strictly increasing");
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(n_values.size());
    for (std::size_t n : n_values) {
        double target = 0.0;
        if (regime.kind == GrowthRegime::Kind::Polynomial) {
            const double nt = std::pow(double(n), regime.tau);
            target = std::floor(std::sqrt(regime.c1 * regime.c2) * nt + 0.5);
            // Clamp into the integer band [ceil(c1 n^tau), floor(c2 n^tau)]
            // when nonempty; an empty band keeps the rounded midpoint.
            const double lo = std::ceil(regime.c1 * nt);
            const double hi = std::floor(regime.c2 * nt);
            if (lo <= hi) {
                if (target < lo) target = lo;
                if (target > hi) target = hi;
            }
        } else {
            target = std::floor(std::exp(regime.c * std::pow(double(n), regime.beta)) + 0.5);
        }
        if (target < 2.0) target = 2.0;
        out.emplace_back(n, std::size_t(target));
    }
    return out;
}

}  // namespace maxdist
