#pragma once

#include <cstddef>
#include <span>

#include "maxdist/matrix.hpp"

namespace maxdist {

enum class Kernel { Naive, BlockedGram };

struct DistanceSpec {
    double q = 2.0;
    Kernel kernel = Kernel::Naive;
    std::size_t tile = 64;  // block edge for BlockedGram

    void validate() const;  // q >= 1; BlockedGram requires q == 2; tile >= 1
};

// Maximum interpoint distance over the row pairs of a matrix. Row indices
// are 0-based; arg_i < arg_j, ties broken by smallest (i, j).
struct MaxDistanceResult {
    double value_pow_q = 0.0;  // max over pairs of sum_k |x_ik - x_jk|^q
    double value = 0.0;        // value_pow_q^(1/q)
    std::size_t arg_i = 0;
    std::size_t arg_j = 1;
};

// sum_k |a_k - b_k|^q. Throws on length mismatch or q < 1.
double qnorm_pow_q_distance(std::span<const double> a, std::span<const double> b, double q);

// Max over the p(p-1)/2 unordered row pairs. Requires p >= 2.
MaxDistanceResult max_interpoint(const DataMatrix& matrix, const DistanceSpec& spec);

// Tiled kernel for q = 2 built on |x-y|^2 = |x|^2 + |y|^2 - 2<x,y>.
// Identical contract to max_interpoint with q = 2; the result does not
// depend on the tile size. The reported value_pow_q is re-accumulated
// directly for the selected pair, so cancellation in the Gram identity
// affects pair selection only within its ~1e-12 noise floor, never the value.
MaxDistanceResult blocked_gram_max_sq(const DataMatrix& matrix, std::size_t tile);

}  // namespace maxdist
