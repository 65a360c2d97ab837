#pragma once

// Independent reference implementations used as test oracles. These were
// written against the definitions alone and deliberately share no code with
// the library: plain loops, no exchangeability shortcuts, no Gram identity.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

struct BruteMax {
    double value_pow_q = -1.0;
    std::size_t i = 0;
    std::size_t j = 1;
};

// O(p^2 n) brute force over row-major values; long double accumulation so the
// numeric path differs from the library kernels.
inline BruteMax brute_force_max(const std::vector<double>& values, std::size_t p,
                                std::size_t n, double q) {
    BruteMax best;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < n; ++k) {
                const long double d = values[i * n + k] - values[j * n + k];
                if (q == 2.0) {
                    acc += d * d;
                } else if (q == 1.0) {
                    acc += fabsl(d);
                } else {
                    acc += powl(fabsl(d), (long double)q);
                }
            }
            const double v = (double)acc;
            if (v > best.value_pow_q) {
                best.value_pow_q = v;
                best.i = i;
                best.j = j;
            }
        }
    }
    return best;
}

// Phi via composite Simpson quadrature of the density on [0, |x|]; absolute
// error far below 1e-12 at the step used.
inline double phi_quadrature(double x) {
    const double ax = std::fabs(x);
    const std::size_t steps = 20000;  // even
    const double h = ax / (double)steps;
    const auto density = [](double u) {
        return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::acos(-1.0));
    };
    double sum = density(0.0) + density(ax);
    for (std::size_t k = 1; k < steps; ++k) {
        sum += density(h * (double)k) * ((k % 2) ? 4.0 : 2.0);
    }
    const double integral = ax == 0.0 ? 0.0 : sum * h / 3.0;
    return x >= 0.0 ? 0.5 + integral : 0.5 - integral;
}

struct ChenSteinOracle {
    double lambda = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double p_max_le_t = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double pair_mean = 0.0;
    double pair_var = 0.0;
};

// Full-joint enumeration of a p x n i.i.d. matrix over the given atoms, with
// every per-pair and per-pair-couple probability computed directly (no
// exchangeability reduction). The pair-distance moments are themselves
// enumerated over two atoms rather than taken from moment formulas.
inline ChenSteinOracle enumerate_chen_stein(
    const std::vector<std::pair<double, double>>& atoms, std::size_t p, std::size_t n,
    double t) {
    ChenSteinOracle out;

    for (const auto& [va, wa] : atoms) {
        for (const auto& [vb, wb] : atoms) {
            out.pair_mean += wa * wb * (va - vb) * (va - vb);
        }
    }
    double second = 0.0;
    for (const auto& [va, wa] : atoms) {
        for (const auto& [vb, wb] : atoms) {
            const double d2 = (va - vb) * (va - vb);
            second += wa * wb * d2 * d2;
        }
    }
    out.pair_var = second - out.pair_mean * out.pair_mean;
    const double sd = std::sqrt(out.pair_var);

    const std::size_t cells = p * n;
    const std::size_t s = atoms.size();
    std::vector<std::size_t> idx(cells, 0);
    std::vector<double> v(cells);

    const std::size_t npairs = p * (p - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(npairs);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
    }

    std::vector<double> p_exceed(npairs, 0.0);
    std::vector<std::vector<double>> p_joint(npairs, std::vector<double>(npairs, 0.0));
    std::vector<char> ex(npairs);

    while (true) {
        double prob = 1.0;
        for (std::size_t c = 0; c < cells; ++c) {
            v[c] = atoms[idx[c]].first;
            prob *= atoms[idx[c]].second;
        }
        bool any = false;
        for (std::size_t a = 0; a < npairs; ++a) {
            const auto [i, j] = pairs[a];
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = v[i * n + k] - v[j * n + k];
                sum += (d * d - out.pair_mean) / sd;
            }
            ex[a] = (sum / std::sqrt((double)n)) > t;
            any = any || ex[a];
        }
        for (std::size_t a = 0; a < npairs; ++a) {
            if (!ex[a]) continue;
            p_exceed[a] += prob;
            for (std::size_t b = 0; b < npairs; ++b) {
                if (ex[b]) p_joint[a][b] += prob;
            }
        }
        if (!any) out.p_max_le_t += prob;

        std::size_t c = 0;
        while (c < cells && ++idx[c] == s) {
            idx[c] = 0;
            ++c;
        }
        if (c == cells) break;
    }

    const auto shares_row = [&](std::size_t a, std::size_t b) {
        const auto [i, j] = pairs[a];
        const auto [k, l] = pairs[b];
        return i == k || i == l || j == k || j == l;
    };

    for (std::size_t a = 0; a < npairs; ++a) {
        out.lambda += p_exceed[a];
        for (std::size_t b = 0; b < npairs; ++b) {
            if (a == b || !shares_row(a, b)) continue;
            out.b1 += p_exceed[a] * p_exceed[b];
            out.b2 += p_joint[a][b];
        }
    }
    out.p1 = p_exceed[0];
    out.p2 = npairs >= 2 ? p_joint[0][1] : 0.0;
    return out;
}

}  // namespace oracle
