#include "maxdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxdist {

namespace {

// Fixed left-to-right accumulation with four independent partials: fast on a
// single core and bitwise reproducible regardless of tiling or thread count.
double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) s0 += a[k] * b[k];
    return ((s0 + s1) + s2) + s3;
}

double diff_pow_q(const double* a, const double* b, std::size_t n, double q) {
    if (q == 2.0) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::size_t k = 0;
        for (; k + 4 <= n; k += 4) {
            const double d0 = a[k] - b[k];
            const double d1 = a[k + 1] - b[k + 1];
            const double d2 = a[k + 2] - b[k + 2];
            const double d3 = a[k + 3] - b[k + 3];
            s0 += d0 * d0;
            s1 += d1 * d1;
            s2 += d2 * d2;
            s3 += d3 * d3;
        }
        for (; k < n; ++k) {
            const double d = a[k] - b[k];
            s0 += d * d;
        }
        return ((s0 + s1) + s2) + s3;
    }
    if (q == 1.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::abs(a[k] - b[k]);
        return s;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::pow(std::abs(a[k] - b[k]), q);
    return s;
}

struct Candidate {
    double value = -1.0;
    std::size_t i = 0;
    std::size_t j = 1;

    // Total order: larger value wins, ties go to the lexicographically
    // smallest pair, so reductions commute.
    bool beats(const Candidate& other) const {
        if (value != other.value) return value > other.value;
        if (i != other.i) return i < other.i;
        return j < other.j;
    }
};

}  // namespace

void DistanceSpec::validate() const {
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw std::invalid_argument("distance: q must be finite and >= 1");
    }
    if (kernel == Kernel::BlockedGram && q != 2.0) {
        throw std::invalid_argument("distance: blocked Gram kernel requires q = 2");
    }
    if (tile == 0) throw std::invalid_argument("distance: tile must be >= 1");
}

double qnorm_pow_q_distance(std::span<const double> a, std::span<const double> b, double q) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: length mismatch " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw std::invalid_argument("distance: q must be finite and >= 1");
    }
    return diff_pow_q(a.data(), b.data(), a.size(), q);
}

MaxDistanceResult max_interpoint(const DataMatrix& matrix, const DistanceSpec& spec) {
    spec.validate();
    const std::size_t p = matrix.rows();
    if (p < 2) throw std::invalid_argument("distance: need at least two rows");
    if (spec.kernel == Kernel::BlockedGram) return blocked_gram_max_sq(matrix, spec.tile);

    const std::size_t n = matrix.cols();
    const double* base = matrix.values().data();
    Candidate best;
    for (std::size_t i = 0; i + 1 < p; ++i) {
        const double* ri = base + i * n;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d = diff_pow_q(ri, base + j * n, n, spec.q);
            const Candidate c{d, i, j};
            if (c.beats(best)) best = c;
        }
    }
    MaxDistanceResult result;
    result.value_pow_q = best.value;
    result.value = spec.q == 2.0 ? std::sqrt(best.value) : std::pow(best.value, 1.0 / spec.q);
    result.arg_i = best.i;
    result.arg_j = best.j;
    return result;
}

MaxDistanceResult blocked_gram_max_sq(const DataMatrix& matrix, std::size_t tile) {
    const std::size_t p = matrix.rows();
    const std::size_t n = matrix.cols();
    if (p < 2) throw std::invalid_argument("distance: need at least two rows");
    if (tile == 0) throw std::invalid_argument("distance: tile must be >= 1");

    const double* base = matrix.values().data();
    std::vector<double> sq(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double* ri = base + i * n;
        sq[i] = dot(ri, ri, n);
    }

    Candidate best;
    for (std::size_t bi = 0; bi < p; bi += tile) {
        const std::size_t ei = std::min(bi + tile, p);
        for (std::size_t bj = bi; bj < p; bj += tile) {
            const std::size_t ej = std::min(bj + tile, p);
            for (std::size_t i = bi; i < ei; ++i) {
                const double* ri = base + i * n;
                const std::size_t j0 = std::max(bj, i + 1);
                for (std::size_t j = j0; j < ej; ++j) {
                    const double g = dot(ri, base + j * n, n);
                    const double d = std::max(0.0, sq[i] + sq[j] - 2.0 * g);
                    const Candidate c{d, i, j};
                    if (c.beats(best)) best = c;
                }
            }
        }
    }

    MaxDistanceResult result;
    result.arg_i = best.i;
    result.arg_j = best.j;
    result.value_pow_q =
        diff_pow_q(base + best.i * n, base + best.j * n, n, 2.0);
    result.value = std::sqrt(result.value_pow_q);
    return result;
}

}  // namespace maxdist
