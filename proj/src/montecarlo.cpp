#include "maxdist/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "maxdist/distance.hpp"
#include "maxdist/io.hpp"
#include "maxdist/parallel.hpp"
#include "maxdist/rng.hpp"
#include "maxdist/version.hpp"

namespace maxdist {

namespace {

constexpr std::size_t kProfileTriples = 1'000'000;
constexpr double kBandLo = 1.5;
constexpr double kBandHi = 2.5;

DataMatrix sample_matrix_stream(const DistributionSpec& dist, std::size_t p, std::size_t n,
                                rng::Stream& stream) {
    std::vector<double> values(p * n);
    for (auto& v : values) v = dist.sample(stream);
    return DataMatrix(p, n, std::move(values));
}

std::string describe_condition(const DistributionSpec& dist, bool holds) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", dist.corr_q2());
    return std::string("Corr(q=2) = ") + buf + (holds ? " < 1/3" : " >= 1/3") +
           (holds ? "; within the correlation condition"
                  : "; outside the correlation condition");
}

}  // namespace

void SimulationConfig::validate() const {
    dist.validate();
    if (!(dist.variance() > 0.0)) {
        throw std::invalid_argument("simulation: degenerate entry distribution, variance <= 0");
    }
    if (iterations == 0) throw std::invalid_argument("simulation: iterations must be >= 1");
    if (pairs.empty()) throw std::invalid_argument("simulation: need at least one (p, n) pair");
    if (pairs.size() > (1u << 24)) {
        throw std::invalid_argument("simulation: at most 2^24 (p, n) pairs");
    }
    if (iterations > 0xFFFFFFFFull) {
        throw std::invalid_argument("simulation: at most 2^32 iterations");
    }
    for (const auto& [p, n] : pairs) {
        if (p < 2) throw std::invalid_argument("simulation: every p must be >= 2");
        if (n == 0) throw std::invalid_argument("simulation: every n must be >= 1");
    }
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw std::invalid_argument("simulation: q must be finite and >= 1");
    }
    if (profile_source == ProfileSource::SampleEstimate) {
        throw std::invalid_argument("simulation: profile_source must be Analytic or MonteCarlo");
    }
}

DataMatrix sample_matrix(const DistributionSpec& dist, std::size_t p, std::size_t n,
                         std::uint64_t seed) {
    dist.validate();
    if (p == 0 || n == 0) throw std::invalid_argument("sample_matrix: dimensions must be positive");
    rng::Stream stream(seed, rng::StreamPurpose::UserMatrix);
    return sample_matrix_stream(dist, p, n, stream);
}

MomentProfile simulation_profile(const SimulationConfig& config) {
    config.validate();
    if (config.profile_source == ProfileSource::Analytic && config.q == 2.0) {
        return analytic_profile(config.dist, 2.0);
    }
    MomentProfile profile =
        profile_from_sampler(config.dist, config.q, kProfileTriples, config.master_seed);
    if (config.profile_source == ProfileSource::Analytic) {
        profile.warning = "no closed form at q != 2; profile estimated from " +
                          std::to_string(kProfileTriples) + " triples";
    }
    return profile;
}

double run_iteration(const SimulationConfig& config, std::size_t pair_index,
                     std::size_t iter_index) {
    return run_iteration(config, pair_index, iter_index, simulation_profile(config));
}

double run_iteration(const SimulationConfig& config, std::size_t pair_index,
                     std::size_t iter_index, const MomentProfile& profile) {
    if (pair_index >= config.pairs.size()) {
        throw std::out_of_range("simulation: pair_index out of range");
    }
    if (iter_index >= config.iterations) {
        throw std::out_of_range("simulation: iter_index out of range");
    }
    const auto [p, n] = config.pairs[pair_index];
    rng::Stream stream(config.master_seed, rng::StreamPurpose::Simulation,
                       std::uint32_t(pair_index), std::uint32_t(iter_index));
    const DataMatrix matrix = sample_matrix_stream(config.dist, p, n, stream);

    DistanceSpec spec;
    spec.q = config.q;
    spec.kernel = config.q == 2.0 ? Kernel::BlockedGram : Kernel::Naive;
    const MaxDistanceResult max = max_interpoint(matrix, spec);
    return normalized_statistic(max.value_pow_q, n, p, profile).z;
}

SimulationResult run_simulation(const SimulationConfig& config, std::size_t threads) {
    config.validate();
    const MomentProfile profile = simulation_profile(config);

    SimulationResult result;
    result.z_values.assign(config.pairs.size(), std::vector<double>(config.iterations, 0.0));
    const std::size_t total = config.pairs.size() * config.iterations;
    parallel_for(
        total,
        [&](std::size_t task) {
            const std::size_t pair_index = task / config.iterations;
            const std::size_t iter_index = task % config.iterations;
            result.z_values[pair_index][iter_index] =
                run_iteration(config, pair_index, iter_index, profile);
        },
        threads);

    result.summaries.reserve(config.pairs.size());
    for (std::size_t pi = 0; pi < config.pairs.size(); ++pi) {
        const auto& z = result.z_values[pi];
        PairSummary summary;
        summary.p = config.pairs[pi].first;
        summary.n = config.pairs[pi].second;
        summary.iterations = config.iterations;
        double sum = 0.0;
        summary.min = z.front();
        summary.max = z.front();
        std::size_t in_band = 0;
        for (double v : z) {
            sum += v;
            summary.min = std::min(summary.min, v);
            summary.max = std::max(summary.max, v);
            if (v >= kBandLo && v <= kBandHi) ++in_band;
        }
        summary.mean = sum / double(z.size());
        double ss = 0.0;
        for (double v : z) ss += (v - summary.mean) * (v - summary.mean);
        summary.sd = z.size() > 1 ? std::sqrt(ss / double(z.size() - 1)) : 0.0;
        summary.frac_in_band = double(in_band) / double(z.size());
        result.summaries.push_back(summary);
    }

    result.master_seed = config.master_seed;
    result.distribution = config.dist.to_string();
    result.q = config.q;
    result.profile_source = profile.source;
    result.rng_id = kRngId;
    result.profile = profile;
    result.corr_condition_holds = config.dist.corr_q2() < (1.0 / 3.0);
    result.condition_note = describe_condition(config.dist, result.corr_condition_holds);
    return result;
}

SimulationConfig reference_protocol(std::uint64_t master_seed) {
    SimulationConfig config;
    config.dist = DistributionSpec{NormalDist{0.0, 1.0}};
    config.pairs = {{150, 100}, {200, 200}, {500, 250}, {600, 400}};
    config.iterations = 300;
    config.master_seed = master_seed;
    config.q = 2.0;
    config.profile_source = ProfileSource::Analytic;
    return config;
}

std::vector<std::filesystem::path> reproduce_reference_figures(
    std::uint64_t master_seed, const std::filesystem::path& out_dir, std::size_t threads) {
    std::filesystem::create_directories(out_dir);
    const SimulationConfig config = reference_protocol(master_seed);
    const SimulationResult result = run_simulation(config, threads);

    std::vector<std::filesystem::path> written;
    for (std::size_t pi = 0; pi < config.pairs.size(); ++pi) {
        const auto [p, n] = config.pairs[pi];
        const auto path = out_dir / ("pair_" + std::to_string(p) + "x" + std::to_string(n) +
                                     ".csv");
        io::write_results_csv_pair(path, result, pi);
        written.push_back(path);
    }

    const auto summary_path = out_dir / "summary.json";
    io::write_summary_json(summary_path, result);
    written.push_back(summary_path);

    const auto panel_title = [&](std::size_t pi) {
        const auto [p, n] = config.pairs[pi];
        return "(p,n)=(" + std::to_string(p) + "," + std::to_string(n) + ")";
    };
    const auto svg1 = out_dir / "scatter_150x100_200x200.svg";
    io::emit_scatter_pair_svg(result.z_values[0], panel_title(0), result.z_values[1],
                              panel_title(1), 2.0, svg1);
    written.push_back(svg1);
    const auto svg2 = out_dir / "scatter_500x250_600x400.svg";
    io::emit_scatter_pair_svg(result.z_values[2], panel_title(2), result.z_values[3],
                              panel_title(3), 2.0, svg2);
    written.push_back(svg2);
    return written;
}

}  // namespace maxdist
