#include "maxdist/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxdist/parallel.hpp"

namespace maxdist {

namespace {

constexpr std::size_t kShards = 64;

double pow_q(double diff, double q) {
    if (q == 2.0) return diff * diff;
    if (q == 1.0) return std::abs(diff);
    return std::pow(std::abs(diff), q);
}

// Enumerates every assignment of `cells` i.i.d. atoms, invoking
// fn(values, probability). Exact: probabilities are products of atom masses.
template <class Fn>
void enumerate_assignments(const std::vector<std::pair<double, double>>& atoms,
                           std::size_t cells, Fn&& fn) {
    const std::size_t s = atoms.size();
    std::vector<std::size_t> idx(cells, 0);
    std::vector<double> values(cells);
    while (true) {
        double prob = 1.0;
        for (std::size_t c = 0; c < cells; ++c) {
            values[c] = atoms[idx[c]].first;
            prob *= atoms[idx[c]].second;
        }
        fn(values, prob);
        std::size_t c = 0;
        while (c < cells && ++idx[c] == s) {
            idx[c] = 0;
            ++c;
        }
        if (c == cells) break;
    }
}

// Normalized pair sum Z over the first two rows of a flat row-major layout.
double pair_z(const double* a, const double* b, std::size_t n, double pair_mean,
              double pair_sd) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += (pow_q(a[k] - b[k], 2.0) - pair_mean) / pair_sd;
    }
    return sum / std::sqrt(double(n));
}

struct McSums {
    double reps = 0.0;
    double k1 = 0.0, k1_sq = 0.0;  // exceeding pairs per replication
    double k2 = 0.0, k2_sq = 0.0;  // exceeding overlapping couples
    double max_le = 0.0;           // indicator max <= t

    McSums& operator+=(const McSums& o) {
        reps += o.reps;
        k1 += o.k1;
        k1_sq += o.k1_sq;
        k2 += o.k2;
        k2_sq += o.k2_sq;
        max_le += o.max_le;
        return *this;
    }
};

// Mean and standard error of a per-replication statistic from its sums.
void mean_se(double sum, double sum_sq, double reps, double scale, double& mean, double& se) {
    mean = sum / (reps * scale);
    if (reps < 2.0) {
        se = 0.0;
        return;
    }
    const double m = sum / reps;
    double var = (sum_sq / reps - m * m) * reps / (reps - 1.0);
    if (var < 0.0) var = 0.0;
    se = std::sqrt(var / reps) / scale;
}

ChenSteinReport assemble(std::size_t p, double t, ChenSteinMode mode, double p1, double p2,
                         double p_max_le_t) {
    const double npairs = 0.5 * double(p) * double(p - 1);
    const double overlap = 2.0 * double(p - 2);
    ChenSteinReport report;
    report.t = t;
    report.mode = mode;
    report.p1 = p1;
    report.p2 = p2;
    report.lambda = npairs * p1;
    report.b1 = npairs * overlap * p1 * p1;
    report.b2 = npairs * overlap * p2;
    report.b3 = 0.0;
    report.bound = chen_stein_bound(report.lambda, report.b1, report.b2, report.b3);
    report.p_max_le_t = p_max_le_t;
    report.poisson_approx = std::exp(-report.lambda);
    report.gap = std::abs(p_max_le_t - report.poisson_approx);
    return report;
}

}  // namespace

std::vector<PairStatistic> pair_statistics(const DataMatrix& matrix,
                                           const MomentProfile& profile) {
    if (matrix.rows() < 2) throw std::invalid_argument("diagnostics: need at least two rows");
    if (!(profile.pair_var_q > 0.0)) {
        throw std::invalid_argument("diagnostics: profile pair_var_q must be positive");
    }
    const std::size_t p = matrix.rows();
    const std::size_t n = matrix.cols();
    const double sd = std::sqrt(profile.pair_var_q);
    const double sqrt_n = std::sqrt(double(n));
    std::vector<PairStatistic> out;
    out.reserve(p * (p - 1) / 2);
    for (std::size_t i = 0; i + 1 < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const auto ri = matrix.row(i);
            const auto rj = matrix.row(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                sum += (pow_q(ri[k] - rj[k], profile.q) - profile.pair_mean_q) / sd;
            }
            out.push_back(PairStatistic{i, j, sum, sum / sqrt_n});
        }
    }
    return out;
}

double chen_stein_bound(double lambda, double b1, double b2, double b3) {
    if (lambda < 0.0 || b1 < 0.0 || b2 < 0.0 || b3 < 0.0) {
        throw std::invalid_argument("chen-stein: inputs must be nonnegative");
    }
    const double sum = b1 + b2 + b3;
    return lambda > 1.0 ? sum / lambda : sum;
}

double default_chen_stein_threshold(std::size_t p, double eps) {
    if (p < 2) throw std::invalid_argument("chen-stein: p must be at least 2");
    if (!(eps >= 0.0 && eps < 4.0)) {
        throw std::invalid_argument("chen-stein: eps must lie in [0, 4)");
    }
    return std::sqrt((4.0 - eps) * std::log(double(p)));
}

ChenSteinReport chen_stein_interpoint(const DistributionSpec& dist, std::size_t p,
                                      std::size_t n, double t, ChenSteinMode mode,
                                      std::uint64_t budget, std::uint64_t seed) {
    dist.validate();
    if (p < 2) throw std::invalid_argument("chen-stein: p must be at least 2");
    if (n == 0) throw std::invalid_argument("chen-stein: n must be positive");
    if (budget == 0) throw std::invalid_argument("chen-stein: budget must be positive");

    const MomentProfile profile = analytic_profile(dist, 2.0);
    const double pair_mean = profile.pair_mean_q;
    const double pair_sd = std::sqrt(profile.pair_var_q);

    if (mode == ChenSteinMode::ExactEnumeration) {
        if (!dist.finite_support()) {
            throw std::invalid_argument(
                "chen-stein: exact enumeration requires a finite-support distribution");
        }
        const auto atoms = dist.support();
        std::uint64_t states = 1;
        for (std::size_t c = 0; c < p * n; ++c) {
            if (states > budget / atoms.size()) {
                throw std::invalid_argument(
                    "chen-stein: enumeration needs support^(p*n) states, over budget " +
                    std::to_string(budget));
            }
            states *= atoms.size();
        }

        // P1 over one pair of rows (2n cells).
        double p1 = 0.0;
        enumerate_assignments(atoms, 2 * n, [&](const std::vector<double>& v, double prob) {
            if (pair_z(v.data(), v.data() + n, n, pair_mean, pair_sd) > t) p1 += prob;
        });

        // P2 over one overlapping row triple (3n cells); empty for p = 2.
        double p2 = 0.0;
        if (p >= 3) {
            enumerate_assignments(atoms, 3 * n, [&](const std::vector<double>& v, double prob) {
                if (pair_z(v.data(), v.data() + n, n, pair_mean, pair_sd) > t &&
                    pair_z(v.data(), v.data() + 2 * n, n, pair_mean, pair_sd) > t) {
                    p2 += prob;
                }
            });
        }

        // P(max <= t) over the full p x n matrix.
        double p_max = 0.0;
        enumerate_assignments(atoms, p * n, [&](const std::vector<double>& v, double prob) {
            for (std::size_t i = 0; i + 1 < p; ++i) {
                for (std::size_t j = i + 1; j < p; ++j) {
                    if (pair_z(v.data() + i * n, v.data() + j * n, n, pair_mean, pair_sd) > t) {
                        return;
                    }
                }
            }
            p_max += prob;
        });

        return assemble(p, t, mode, p1, p2, p_max);
    }

    // Monte Carlo: `budget` replications, common random numbers across the
    // three estimated probabilities; per-replication streams keep the result
    // independent of sharding and thread schedule.
    const std::uint64_t reps = budget;
    const std::size_t shards = std::size_t(std::min<std::uint64_t>(kShards, reps));
    const std::uint64_t base = reps / shards;
    const std::uint64_t rem = reps % shards;
    const double npairs = 0.5 * double(p) * double(p - 1);
    const double ncouples = npairs * double(p - 2);  // unordered overlapping couples

    std::vector<McSums> sums(shards);
    parallel_for(shards, [&](std::size_t s) {
        const std::uint64_t lo = s * base + std::min<std::uint64_t>(s, rem);
        const std::uint64_t hi = lo + base + (s < rem ? 1 : 0);
        McSums local;
        std::vector<double> values(p * n);
        std::vector<char> exceed(p * p);
        for (std::uint64_t r = lo; r < hi; ++r) {
            rng::Stream stream(seed, rng::StreamPurpose::ChenStein,
                               std::uint32_t(r >> 32), std::uint32_t(r));
            for (auto& v : values) v = dist.sample(stream);
            std::fill(exceed.begin(), exceed.end(), 0);
            std::uint64_t k1 = 0;
            bool all_le = true;
            for (std::size_t i = 0; i + 1 < p; ++i) {
                for (std::size_t j = i + 1; j < p; ++j) {
                    const bool ex =
                        pair_z(values.data() + i * n, values.data() + j * n, n, pair_mean,
                               pair_sd) > t;
                    exceed[i * p + j] = ex;
                    exceed[j * p + i] = ex;
                    if (ex) {
                        ++k1;
                        all_le = false;
                    }
                }
            }
            std::uint64_t k2 = 0;
            if (p >= 3) {
                for (std::size_t i = 0; i < p; ++i) {
                    for (std::size_t j = 0; j + 1 < p; ++j) {
                        if (j == i || !exceed[i * p + j]) continue;
                        for (std::size_t k = j + 1; k < p; ++k) {
                            if (k == i) continue;
                            if (exceed[i * p + k]) ++k2;
                        }
                    }
                }
            }
            local.reps += 1.0;
            local.k1 += double(k1);
            local.k1_sq += double(k1) * double(k1);
            local.k2 += double(k2);
            local.k2_sq += double(k2) * double(k2);
            local.max_le += all_le ? 1.0 : 0.0;
        }
        sums[s] = local;
    });

    McSums total;
    for (const auto& s : sums) total += s;

    double p1 = 0.0, se_p1 = 0.0, p2 = 0.0, se_p2 = 0.0, p_max = 0.0, se_p_max = 0.0;
    mean_se(total.k1, total.k1_sq, total.reps, npairs, p1, se_p1);
    if (p >= 3) mean_se(total.k2, total.k2_sq, total.reps, ncouples, p2, se_p2);
    mean_se(total.max_le, total.max_le, total.reps, 1.0, p_max, se_p_max);

    ChenSteinReport report = assemble(p, t, mode, p1, p2, p_max);
    report.replications = reps;
    report.se_p1 = se_p1;
    report.se_p2 = se_p2;
    report.se_p_max = se_p_max;
    // First-order error propagation through lambda = m p1, b1 = w p1^2,
    // b2 = w p2, bound = min(1, 1/lambda)(b1 + b2).
    const double m = npairs;
    const double w = npairs * 2.0 * double(p - 2);
    const double d_gap_dlambda = report.poisson_approx * m * se_p1;
    report.se_gap = std::sqrt(se_p_max * se_p_max + d_gap_dlambda * d_gap_dlambda);
    double d1 = 0.0, d2 = 0.0;
    if (report.lambda > 1.0) {
        d1 = (w / m) * (1.0 - (p1 > 0.0 ? p2 / (p1 * p1) : 0.0));
        d2 = (w / m) * (p1 > 0.0 ? 1.0 / p1 : 0.0);
    } else {
        d1 = 2.0 * w * p1;
        d2 = w;
    }
    report.se_bound = std::sqrt(d1 * se_p1 * d1 * se_p1 + d2 * se_p2 * d2 * se_p2);
    return report;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

MdpResult mdp_ratio(const DistributionSpec& dist, std::size_t n, double x,
                    std::uint64_t iters, std::uint64_t seed) {
    dist.validate();
    if (n == 0) throw std::invalid_argument("mdp: n must be positive");
    if (iters == 0) throw std::invalid_argument("mdp: iters must be positive");
    if (!(x >= 0.0)) throw std::invalid_argument("mdp: x must be nonnegative");
    const double mu = dist.mean();
    const double sigma = std::sqrt(dist.variance());
    if (!(sigma > 0.0)) throw std::domain_error("mdp: degenerate distribution, variance <= 0");

    const double threshold = x * std::sqrt(double(n)) * sigma;  // on sum of (X - mu)
    const std::size_t shards = std::size_t(std::min<std::uint64_t>(kShards, iters));
    const std::uint64_t base = iters / shards;
    const std::uint64_t rem = iters % shards;
    std::vector<std::uint64_t> counts(shards, 0);
    parallel_for(shards, [&](std::size_t s) {
        const std::uint64_t lo = s * base + std::min<std::uint64_t>(s, rem);
        const std::uint64_t hi = lo + base + (s < rem ? 1 : 0);
        std::uint64_t count = 0;
        for (std::uint64_t r = lo; r < hi; ++r) {
            rng::Stream stream(seed, rng::StreamPurpose::ModerateDeviation,
                               std::uint32_t(r >> 32), std::uint32_t(r));
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += dist.sample(stream) - mu;
            if (sum >= threshold) ++count;
        }
        counts[s] = count;
    });

    std::uint64_t exceed = 0;
    for (std::uint64_t c : counts) exceed += c;

    MdpResult result;
    result.iters = iters;
    result.exceedances = exceed;
    result.p_hat = double(exceed) / double(iters);
    result.normal_tail = 1.0 - std_normal_cdf(x);
    result.ratio = result.p_hat / result.normal_tail;
    result.low_count_warning =
        exceed == 0 || double(iters) * result.normal_tail < 100.0;
    return result;
}

}  // namespace maxdist
