#include "maxdist/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxdist/diagnostics.hpp"
#include "maxdist/distance.hpp"
#include "maxdist/io.hpp"
#include "maxdist/law.hpp"
#include "maxdist/moments.hpp"
#include "maxdist/montecarlo.hpp"
#include "maxdist/version.hpp"

namespace maxdist {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(pos, comma - pos);
        const std::size_t colon = token.find(':');
        if (token.empty() || colon == std::string::npos) {
            throw std::invalid_argument("--pairs expects p:n tokens, got '" + token + "'");
        }
        try {
            pairs.emplace_back(std::stoull(token.substr(0, colon)),
                               std::stoull(token.substr(colon + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("--pairs expects p:n tokens, got '" + token + "'");
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (pairs.empty()) throw std::invalid_argument("--pairs must name at least one p:n pair");
    return pairs;
}

std::vector<std::size_t> parse_n_values(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(pos, comma - pos);
        if (token.empty()) throw std::invalid_argument("--n-values expects integers");
        try {
            out.push_back(std::stoull(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("--n-values: bad integer '" + token + "'");
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) throw std::invalid_argument("--n-values must not be empty");
    return out;
}

const char* source_name(ProfileSource source) {
    switch (source) {
        case ProfileSource::Analytic: return "analytic";
        case ProfileSource::MonteCarloEstimate: return "montecarlo";
        case ProfileSource::SampleEstimate: return "sample";
    }
    return "unknown";
}

json profile_json(const MomentProfile& p) {
    json j{{"mu", p.mu},
           {"sigma2", p.sigma2},
           {"m2", p.m2},
           {"m4", p.m4},
           {"q", p.q},
           {"pair_mean_q", p.pair_mean_q},
           {"pair_var_q", p.pair_var_q},
           {"rho", p.rho},
           {"pair_sum_var", p.pair_sum_var},
           {"source", source_name(p.source)}};
    if (p.source != ProfileSource::Analytic) {
        j["se_pair_mean_q"] = p.se_pair_mean_q;
        j["se_pair_var_q"] = p.se_pair_var_q;
        j["se_rho"] = p.se_rho;
        j["se_m4"] = p.se_m4;
    }
    if (!p.warning.empty()) j["warning"] = p.warning;
    return j;
}

struct Emitter {
    bool json_mode = false;
    std::ostream& out;
    json provenance;

    void text(const std::string& line) {
        if (!json_mode) out << line << "\n";
    }
    void finish(json doc) {
        if (json_mode) {
            doc["provenance"] = provenance;
            out << doc.dump(2) << "\n";
        }
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"maximum interpoint distance statistics"};
    app.name("maxdist");
    app.require_subcommand(1);

    bool json_mode = false;
    std::size_t threads = 0;
    app.add_flag("--json", json_mode, "machine-readable JSON on stdout");
    app.add_option("--threads", threads,
                   "worker threads (0 = THREADS env or hardware; never affects results)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the K-iteration z-statistic harness");
    std::string sim_dist = "normal";
    std::string sim_pairs = "150:100,200:200,500:250,600:400";
    std::size_t sim_iters = 300;
    std::uint64_t sim_seed = 0;
    double sim_q = 2.0;
    std::string sim_out;
    sim->add_option("--dist", sim_dist, "entry distribution, e.g. normal:0:1");
    sim->add_option("--pairs", sim_pairs, "comma-separated p:n tokens");
    sim->add_option("--iters", sim_iters, "iterations K per pair");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--q", sim_q, "norm exponent");
    sim->add_option("--out", sim_out, "results CSV path")->required();

    // stat
    auto* stat = app.add_subcommand("stat", "max interpoint distance and z for a CSV matrix");
    std::string stat_input;
    double stat_q = 2.0;
    std::string stat_profile = "estimate";
    stat->add_option("--input", stat_input, "matrix CSV, one point per row")->required();
    stat->add_option("--q", stat_q, "norm exponent");
    stat->add_option("--profile", stat_profile, "estimate | analytic:<dist>");

    // check
    auto* check = app.add_subcommand("check", "correlation admissibility condition");
    std::string check_dist;
    std::string check_input;
    check->add_option("--dist", check_dist, "entry distribution");
    check->add_option("--input", check_input, "matrix CSV to estimate from");

    // chenstein
    auto* cs = app.add_subcommand("chenstein", "Poisson approximation diagnostics");
    std::string cs_dist = "normal";
    std::size_t cs_p = 0;
    std::size_t cs_n = 0;
    double cs_t = 0.0;
    bool cs_t_set = false;
    std::string cs_mode = "mc";
    std::uint64_t cs_budget = 100000;
    std::uint64_t cs_seed = 0;
    cs->add_option("--dist", cs_dist, "entry distribution");
    cs->add_option("--p", cs_p, "rows")->required();
    cs->add_option("--n", cs_n, "dimension")->required();
    cs->add_option("--t", cs_t, "threshold on the normalized pair-sum scale")
        ->each([&](const std::string&) { cs_t_set = true; });
    cs->add_option("--mode", cs_mode, "exact | mc");
    cs->add_option("--budget", cs_budget, "enumeration cap or replication count");
    cs->add_option("--seed", cs_seed, "seed (mc mode)");

    // mdp
    auto* mdp = app.add_subcommand("mdp", "moderate-deviation tail ratio");
    std::string mdp_dist = "normal";
    std::size_t mdp_n = 0;
    double mdp_x = 0.0;
    std::uint64_t mdp_iters = 1000000;
    std::uint64_t mdp_seed = 0;
    mdp->add_option("--dist", mdp_dist, "summand distribution (standardized internally)");
    mdp->add_option("--n", mdp_n, "summands per replication")->required();
    mdp->add_option("--x", mdp_x, "tail point, x >= 0")->required();
    mdp->add_option("--iters", mdp_iters, "replications");
    mdp->add_option("--seed", mdp_seed, "seed");

    // regime
    auto* reg = app.add_subcommand("regime", "emit (n, p) pairs for a growth regime");
    std::string reg_kind = "polynomial";
    double reg_tau = 1.0, reg_c1 = 1.0, reg_c2 = 1.0;
    double reg_alpha = 0.5, reg_beta = 0.25, reg_c = 1.0;
    std::string reg_n_values;
    reg->add_option("--kind", reg_kind, "polynomial | exponential");
    reg->add_option("--tau", reg_tau, "polynomial exponent");
    reg->add_option("--c1", reg_c1, "polynomial band lower constant");
    reg->add_option("--c2", reg_c2, "polynomial band upper constant");
    reg->add_option("--alpha", reg_alpha, "tail exponent in (0, 1/2]");
    reg->add_option("--beta", reg_beta, "exponential growth exponent");
    reg->add_option("--c", reg_c, "exponential prefactor");
    reg->add_option("--n-values", reg_n_values, "comma-separated increasing n")->required();

    // reproduce-figures
    auto* rf = app.add_subcommand("reproduce-figures", "reference protocol: CSVs, JSON, SVGs");
    std::uint64_t rf_seed = 0;
    std::string rf_out_dir;
    rf->add_option("--seed", rf_seed, "master seed");
    rf->add_option("--out-dir", rf_out_dir, "output directory")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "scatter SVG from a results CSV");
    std::string plot_input;
    double plot_reference = 2.0;
    std::string plot_out;
    plot->add_option("--input", plot_input, "results CSV")->required();
    plot->add_option("--reference", plot_reference, "horizontal reference ordinate");
    plot->add_option("--out", plot_out, "SVG path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All) << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string joined;
    for (const auto& a : args) {
        joined += a;
        joined += '\x1f';
    }
    const std::string config_hash = hex64(fnv1a(joined));

    Emitter emit{json_mode, out, json(), };
    emit.provenance = {{"version", kVersion}, {"rng_id", kRngId}, {"config_hash", config_hash}};

    const auto header = [&](const std::string& seed_text) {
        if (!json_mode) {
            out << "# maxdist " << kVersion << " rng=" << kRngId << " seed=" << seed_text
                << " config=" << config_hash << "\n";
        }
    };

    try {
        if (app.got_subcommand(sim)) {
            header(std::to_string(sim_seed));
            emit.provenance["seed"] = sim_seed;
            SimulationConfig config;
            config.dist = DistributionSpec::parse(sim_dist);
            config.pairs = parse_pairs(sim_pairs);
            config.iterations = sim_iters;
            config.master_seed = sim_seed;
            config.q = sim_q;
            const SimulationResult result = run_simulation(config, threads);
            io::write_results_csv(sim_out, result);
            emit.text("wrote " + sim_out);
            json pairs = json::array();
            for (std::size_t pi = 0; pi < result.summaries.size(); ++pi) {
                const auto& s = result.summaries[pi];
                emit.text("pair " + std::to_string(pi) + ": p=" + std::to_string(s.p) +
                          " n=" + std::to_string(s.n) + " K=" + std::to_string(s.iterations) +
                          " mean=" + g6(s.mean) + " sd=" + g6(s.sd) + " min=" + g6(s.min) +
                          " max=" + g6(s.max) + " frac_in_band=" + g6(s.frac_in_band));
                pairs.push_back({{"p", s.p},
                                 {"n", s.n},
                                 {"K", s.iterations},
                                 {"mean", s.mean},
                                 {"sd", s.sd},
                                 {"min", s.min},
                                 {"max", s.max},
                                 {"frac_in_band", s.frac_in_band}});
            }
            emit.text("condition: " + result.condition_note);
            emit.finish(json{{"out", sim_out},
                             {"distribution", result.distribution},
                             {"q", result.q},
                             {"profile", profile_json(result.profile)},
                             {"corr_condition_holds", result.corr_condition_holds},
                             {"condition_note", result.condition_note},
                             {"pairs", pairs}});
        } else if (app.got_subcommand(stat)) {
            header("-");
            const DataMatrix matrix = io::read_matrix_csv(stat_input);
            MomentProfile profile;
            if (stat_profile == "estimate") {
                profile = profile_from_data(matrix, stat_q);
            } else if (stat_profile.rfind("analytic:", 0) == 0) {
                const auto dist = DistributionSpec::parse(stat_profile.substr(9));
                profile = stat_q == 2.0 ? analytic_profile(dist, 2.0)
                                        : profile_from_sampler(dist, stat_q, 1000000, 0);
            } else {
                throw std::invalid_argument("--profile expects 'estimate' or 'analytic:<dist>'");
            }
            DistanceSpec spec;
            spec.q = stat_q;
            spec.kernel = stat_q == 2.0 ? Kernel::BlockedGram : Kernel::Naive;
            const MaxDistanceResult max = max_interpoint(matrix, spec);
            const LawStatistic law =
                normalized_statistic(max.value_pow_q, matrix.cols(), matrix.rows(), profile);
            emit.text("p=" + std::to_string(matrix.rows()) + " n=" +
                      std::to_string(matrix.cols()) + " q=" + g6(stat_q));
            emit.text("value=" + io::format_double(max.value) +
                      " value_pow_q=" + io::format_double(max.value_pow_q) + " arg_i=" +
                      std::to_string(max.arg_i) + " arg_j=" + std::to_string(max.arg_j));
            emit.text("z=" + io::format_double(law.z) + " center=" + g6(law.center) +
                      " scale=" + g6(law.scale) + " profile=" + source_name(profile.source));
            emit.finish(json{{"p", matrix.rows()},
                             {"n", matrix.cols()},
                             {"q", stat_q},
                             {"value", max.value},
                             {"value_pow_q", max.value_pow_q},
                             {"arg_i", max.arg_i},
                             {"arg_j", max.arg_j},
                             {"z", law.z},
                             {"center", law.center},
                             {"scale", law.scale},
                             {"profile", profile_json(profile)}});
        } else if (app.got_subcommand(check)) {
            header("-");
            if (check_dist.empty() == check_input.empty()) {
                throw std::invalid_argument("check: pass exactly one of --dist or --input");
            }
            MomentProfile profile;
            if (!check_dist.empty()) {
                profile = analytic_profile(DistributionSpec::parse(check_dist), 2.0);
            } else {
                profile = profile_from_data(io::read_matrix_csv(check_input), 2.0);
            }
            const ConditionReport report = check_condition(profile);
            emit.text("rho=" + io::format_double(report.rho) + " passes=" +
                      bool_name(report.passes));
            emit.text("kurtosis_ratio=" + io::format_double(report.kurtosis_ratio) +
                      " equivalent_passes=" + bool_name(report.equivalent_passes));
            emit.text("rho_q2=" + io::format_double(report.rho_q2) +
                      " moment_order_checked=" + g6(report.moment_order_checked));
            emit.finish(json{{"rho", report.rho},
                             {"passes", report.passes},
                             {"kurtosis_ratio", report.kurtosis_ratio},
                             {"equivalent_passes", report.equivalent_passes},
                             {"rho_q2", report.rho_q2},
                             {"moment_order_checked", report.moment_order_checked},
                             {"profile", profile_json(profile)}});
        } else if (app.got_subcommand(cs)) {
            header(std::to_string(cs_seed));
            emit.provenance["seed"] = cs_seed;
            const auto dist = DistributionSpec::parse(cs_dist);
            if (!cs_t_set) cs_t = default_chen_stein_threshold(cs_p);
            ChenSteinMode mode;
            if (cs_mode == "exact") {
                mode = ChenSteinMode::ExactEnumeration;
            } else if (cs_mode == "mc" || cs_mode == "montecarlo") {
                mode = ChenSteinMode::MonteCarloEstimate;
            } else {
                throw std::invalid_argument("--mode expects 'exact' or 'mc'");
            }
            const ChenSteinReport r =
                chen_stein_interpoint(dist, cs_p, cs_n, cs_t, mode, cs_budget, cs_seed);
            emit.text("t=" + g6(r.t) + " lambda=" + io::format_double(r.lambda) + " b1=" +
                      io::format_double(r.b1) + " b2=" + io::format_double(r.b2) + " b3=0");
            emit.text("bound=" + io::format_double(r.bound) +
                      " p_max_le_t=" + io::format_double(r.p_max_le_t) +
                      " poisson=" + io::format_double(r.poisson_approx) +
                      " gap=" + io::format_double(r.gap));
            if (mode == ChenSteinMode::MonteCarloEstimate) {
                emit.text("replications=" + std::to_string(r.replications) + " se_p1=" +
                          g6(r.se_p1) + " se_p2=" + g6(r.se_p2) + " se_gap=" + g6(r.se_gap) +
                          " se_bound=" + g6(r.se_bound));
            }
            json j{{"t", r.t},
                   {"lambda", r.lambda},
                   {"b1", r.b1},
                   {"b2", r.b2},
                   {"b3", r.b3},
                   {"bound", r.bound},
                   {"p_max_le_t", r.p_max_le_t},
                   {"poisson_approx", r.poisson_approx},
                   {"gap", r.gap},
                   {"p1", r.p1},
                   {"p2", r.p2},
                   {"mode", cs_mode == "exact" ? "exact" : "mc"}};
            if (mode == ChenSteinMode::MonteCarloEstimate) {
                j["replications"] = r.replications;
                j["se_p1"] = r.se_p1;
                j["se_p2"] = r.se_p2;
                j["se_p_max"] = r.se_p_max;
                j["se_gap"] = r.se_gap;
                j["se_bound"] = r.se_bound;
            }
            emit.finish(std::move(j));
        } else if (app.got_subcommand(mdp)) {
            header(std::to_string(mdp_seed));
            emit.provenance["seed"] = mdp_seed;
            const auto dist = DistributionSpec::parse(mdp_dist);
            const MdpResult r = mdp_ratio(dist, mdp_n, mdp_x, mdp_iters, mdp_seed);
            emit.text("ratio=" + io::format_double(r.ratio) + " p_hat=" +
                      io::format_double(r.p_hat) + " normal_tail=" +
                      io::format_double(r.normal_tail));
            emit.text("exceedances=" + std::to_string(r.exceedances) + " iters=" +
                      std::to_string(r.iters) + " low_count_warning=" +
                      bool_name(r.low_count_warning));
            emit.finish(json{{"ratio", r.ratio},
                             {"p_hat", r.p_hat},
                             {"normal_tail", r.normal_tail},
                             {"exceedances", r.exceedances},
                             {"iters", r.iters},
                             {"low_count_warning", r.low_count_warning}});
        } else if (app.got_subcommand(reg)) {
            header("-");
            GrowthRegime regime;
            if (reg_kind == "polynomial") {
                regime.kind = GrowthRegime::Kind::Polynomial;
            } else if (reg_kind == "exponential") {
                regime.kind = GrowthRegime::Kind::Exponential;
            } else {
                throw std::invalid_argument("--kind expects 'polynomial' or 'exponential'");
            }
            regime.tau = reg_tau;
            regime.c1 = reg_c1;
            regime.c2 = reg_c2;
            regime.alpha = reg_alpha;
            regime.beta = reg_beta;
            regime.c = reg_c;
            const auto seq = regime_sequence(regime, parse_n_values(reg_n_values));
            json arr = json::array();
            for (const auto& [n, p] : seq) {
                emit.text("n=" + std::to_string(n) + " p=" + std::to_string(p));
                arr.push_back({{"n", n}, {"p", p}});
            }
            emit.finish(json{{"kind", reg_kind}, {"pairs", arr}});
        } else if (app.got_subcommand(rf)) {
            header(std::to_string(rf_seed));
            emit.provenance["seed"] = rf_seed;
            const auto written = reproduce_reference_figures(rf_seed, rf_out_dir, threads);
            json arr = json::array();
            for (const auto& path : written) {
                emit.text("wrote " + path.string());
                arr.push_back(path.string());
            }
            emit.finish(json{{"out_dir", rf_out_dir}, {"files", arr}});
        } else if (app.got_subcommand(plot)) {
            header("-");
            const auto values = io::read_results_z(plot_input);
            io::emit_scatter_svg(values, plot_reference, plot_out);
            emit.text("wrote " + plot_out);
            emit.finish(json{{"out", plot_out},
                             {"points", values.size()},
                             {"reference", plot_reference}});
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace maxdist
