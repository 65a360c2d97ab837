#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maxdist/rng.hpp"

namespace maxdist {

// Entry distributions for the sampling and diagnostic routines. Each family
// knows its exact low-order moments and its admissibility metadata: whether
// the interpoint correlation condition Corr < 1/3 holds at q = 2, and which
// growth regime its tails support.

struct NormalDist {
    double mu = 0.0;
    double sigma = 1.0;
};

struct UniformDist {
    double a = -1.0;
    double b = 1.0;
};

// P(X = -a) = P(X = a) = epsilon/2, P(X = 0) = 1 - epsilon.
struct SparseTwoPointDist {
    double a = 1.0;
    double epsilon = 0.1;
};

// Exponential(rate) shifted to mean zero.
struct CenteredExponentialDist {
    double rate = 1.0;
};

// Finite support with explicit atoms; weights are normalized on validation.
// Covers coin-flip entries and the random small-support instances used by
// the exact Chen-Stein enumeration.
struct DiscreteDist {
    std::vector<double> values;
    std::vector<double> probs;
};

// Tail class of a family, as relevant for growth-regime admissibility.
enum class TailClass {
    Bounded,         // compact support: every regime condition holds
    SubGaussianish,  // E exp(t|X|) finite for all t (normal)
    SubExponential,  // E exp(t|X|) finite for small t (centered exponential)
};

struct DistributionSpec {
    std::variant<NormalDist, UniformDist, SparseTwoPointDist, CenteredExponentialDist,
                 DiscreteDist>
        family;

    // Throws std::invalid_argument on bad parameters (sigma <= 0, a >= b,
    // epsilon outside (0,1], atom 0, rate <= 0, degenerate discrete spec).
    void validate() const;

    double mean() const;
    double variance() const;
    // Central moments about the family mean.
    double central_m2() const { return variance(); }
    double central_m4() const;

    // Closed-form interpoint correlation at q = 2,
    // (m4 - m2^2) / (2 (m4 + m2^2)); defined whenever variance > 0.
    double corr_q2() const;

    bool finite_support() const;
    // Atoms and probabilities; only valid for finite-support families.
    std::vector<std::pair<double, double>> support() const;

    TailClass tail_class() const;
    // Largest alpha in (0, 1/2] with E exp(t0 |X|^(2 alpha)) < infinity for
    // some t0 > 0. All built-in families admit alpha = 1/2.
    double subweibull_alpha_max() const { return 0.5; }
    // Every built-in family has all polynomial moments finite.
    bool all_moments_finite() const { return true; }

    // One draw; fixed uniform consumption per family (normal: two uniforms
    // per cached pair, everything else: one uniform per draw).
    double sample(rng::Stream& stream) const;

    std::string to_string() const;
    // Parses the CLI grammar, e.g. "normal", "normal:0:2", "uniform:-1:1",
    // "sparse2:1:0.1", "cexp:1", "bernoulli", "discrete:0@0.5,1@0.5".
    static DistributionSpec parse(const std::string& text);
};

}  // namespace maxdist
