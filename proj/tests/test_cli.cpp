#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxdist/cli.hpp"
#include "maxdist/diagnostics.hpp"
#include "maxdist/law.hpp"

using namespace maxdist;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool only_comments(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') return false;
    }
    return true;
}

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "maxdist_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("check reports the condition for analytic families") {
    const auto pass = run({"check", "--dist", "normal"});
    CHECK(pass.code == 0);
    CHECK(pass.err.empty());
    CHECK(pass.out.find("rho=0.25") != std::string::npos);
    CHECK(pass.out.find("passes=true") != std::string::npos);

    const auto fail = run({"check", "--dist", "sparse2:1:0.05"});
    CHECK(fail.code == 0);  // an inadmissible family is a finding, not an error
    CHECK(fail.out.find("passes=false") != std::string::npos);

    const auto uniform = run({"--json", "check", "--dist", "uniform:-1:1"});
    CHECK(uniform.code == 0);
    const auto j = json::parse(uniform.out);
    CHECK(j["rho"].get<double>() == doctest::Approx(1.0 / 7.0).epsilon(1e-13));
    CHECK(j["passes"].get<bool>());
    CHECK(j["equivalent_passes"].get<bool>());
    CHECK(j["provenance"]["rng_id"] == "philox4x32-10");
    CHECK(j["provenance"].contains("version"));
    CHECK(j["provenance"].contains("config_hash"));
}

TEST_CASE("check via an input csv") {
    const auto path = temp_dir() / "pm1.csv";
    std::ofstream(path) << "1,-1,1,-1\n-1,1,-1,1\n";
    const auto r = run({"--json", "check", "--input", path.string()});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["rho"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(j["kurtosis_ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["passes"].get<bool>());
}

TEST_CASE("check demands exactly one source") {
    const auto neither = run({"check"});
    CHECK(neither.code == 2);
    CHECK(neither.err.rfind("error:", 0) == 0);
    CHECK(only_comments(neither.out));

    const auto both = run({"check", "--dist", "normal", "--input", "x.csv"});
    CHECK(both.code == 2);
    CHECK(both.err.rfind("error:", 0) == 0);
}

TEST_CASE("regime sequences and admissibility errors") {
    const auto ok = run({"regime", "--kind", "polynomial", "--tau", "1", "--c1", "1",
                         "--c2", "2.25", "--n-values", "100,200"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("n=100 p=150") != std::string::npos);
    CHECK(ok.out.find("n=200 p=300") != std::string::npos);

    const auto bad = run({"regime", "--kind", "exponential", "--alpha", "0.5", "--beta",
                          "0.4", "--n-values", "16,81"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("beta") != std::string::npos);
    CHECK(bad.err.find("alpha") != std::string::npos);
    CHECK(only_comments(bad.out));

    const auto exp_ok = run({"--json", "regime", "--kind", "exponential", "--alpha", "0.5",
                             "--beta", "0.25", "--n-values", "16,81,256"});
    CHECK(exp_ok.code == 0);
    const auto j = json::parse(exp_ok.out);
    REQUIRE(j["pairs"].size() == 3);
    CHECK(j["pairs"][0]["p"].get<std::size_t>() == 7);
    CHECK(j["pairs"][2]["p"].get<std::size_t>() == 55);
}

TEST_CASE("argument errors exit with code 2 and clean stdout") {
    CHECK(run({"check", "--bogus"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--dist", "normal", "--pairs", "abc"}).code == 2);
    CHECK(run({"simulate", "--dist", "normal", "--pairs", "1:10"}).code == 2);
    CHECK(run({"chenstein", "--dist", "normal", "--p", "4", "--n", "2", "--mode",
               "exact", "--budget", "100"})
              .code == 2);
    const auto bad = run({"check", "--bogus"});
    CHECK(bad.out.empty());
    CHECK(!bad.err.empty());
}

TEST_CASE("help exits cleanly") {
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    CHECK(top.out.find("maxdist") != std::string::npos);
    CHECK(top.out.find("simulate") != std::string::npos);
    const auto sub = run({"simulate", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--pairs") != std::string::npos);
}

TEST_CASE("chenstein exact instance through the cli") {
    const auto r = run({"--json", "chenstein", "--dist", "bernoulli", "--p", "3", "--n",
                        "1", "--t", "0", "--mode", "exact", "--budget", "1000"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["lambda"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(j["b1"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(j["b2"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(j["b3"].get<double>() == 0.0);
    CHECK(j["bound"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["p_max_le_t"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(j["mode"] == "exact");

    const auto text = run({"chenstein", "--dist", "bernoulli", "--p", "3", "--n", "1",
                           "--t", "0", "--mode", "exact", "--budget", "1000"});
    CHECK(text.out.find("lambda=1.5") != std::string::npos);
    CHECK(text.out.find("bound=2") != std::string::npos);
}

TEST_CASE("chenstein defaults the threshold and runs monte carlo") {
    const auto r = run({"--json", "chenstein", "--dist", "normal", "--p", "8", "--n", "10",
                        "--mode", "mc", "--budget", "5000", "--seed", "1"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["t"].get<double>() ==
          doctest::Approx(default_chen_stein_threshold(8)).epsilon(1e-13));
    CHECK(j["replications"].get<std::uint64_t>() == 5000);
    CHECK(j["se_p1"].get<double>() >= 0.0);
    CHECK(j.contains("se_gap"));

    const auto again = run({"--json", "chenstein", "--dist", "normal", "--p", "8", "--n",
                            "10", "--mode", "mc", "--budget", "5000", "--seed", "1"});
    const auto j2 = json::parse(again.out);
    CHECK(j["lambda"].get<double>() == j2["lambda"].get<double>());
    CHECK(j["gap"].get<double>() == j2["gap"].get<double>());
}

TEST_CASE("mdp through the cli") {
    const auto r = run({"--json", "mdp", "--dist", "normal", "--n", "20", "--x", "1.0",
                        "--iters", "20000", "--seed", "3"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["ratio"].get<double>() == doctest::Approx(1.0).epsilon(0.08));
    CHECK(j["normal_tail"].get<double>() ==
          doctest::Approx(1.0 - std_normal_cdf(1.0)).epsilon(1e-12));
    CHECK(!j["low_count_warning"].get<bool>());
    CHECK(j["iters"].get<std::uint64_t>() == 20000);

    const auto rare = run({"--json", "mdp", "--dist", "normal", "--n", "20", "--x", "4.5",
                           "--iters", "1000", "--seed", "3"});
    CHECK(json::parse(rare.out)["low_count_warning"].get<bool>());
}

TEST_CASE("simulate writes a results file") {
    const auto out_path = temp_dir() / "sim.csv";
    const auto r = run({"--json", "simulate", "--dist", "normal", "--pairs", "6:5,4:3",
                        "--iters", "3", "--seed", "9", "--out", out_path.string()});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    REQUIRE(j["pairs"].size() == 2);
    CHECK(j["pairs"][0]["p"].get<std::size_t>() == 6);
    CHECK(j["pairs"][0]["n"].get<std::size_t>() == 5);
    CHECK(j["pairs"][0]["K"].get<std::size_t>() == 3);
    CHECK(j["provenance"]["seed"].get<std::uint64_t>() == 9);
    CHECK(j["corr_condition_holds"].get<bool>());

    std::ifstream in(out_path);
    REQUIRE(in.good());
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# maxdist", 0) == 0);
    std::size_t data_rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("pair_index", 0) != 0) ++data_rows;
    }
    CHECK(data_rows == 6);

    const auto text = run({"simulate", "--dist", "normal", "--pairs", "6:5", "--iters",
                           "2", "--seed", "9", "--out", out_path.string()});
    CHECK(text.code == 0);
    CHECK(text.out.rfind("# maxdist", 0) == 0);
    CHECK(text.out.find("wrote ") != std::string::npos);
    CHECK(text.out.find("mean=") != std::string::npos);
    CHECK(text.out.find("condition:") != std::string::npos);
}

TEST_CASE("simulate fails with exit 1 when the output cannot be written") {
    const auto r = run({"simulate", "--dist", "normal", "--pairs", "4:3", "--iters", "1",
                        "--seed", "1", "--out", "/nonexistent_dir_zz/x.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("stat on a known matrix") {
    const auto path = temp_dir() / "stat.csv";
    std::ofstream(path) << "0,0\n3,4\n";
    const auto r = run({"--json", "stat", "--input", path.string(), "--q", "2",
                        "--profile", "analytic:normal"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["p"].get<std::size_t>() == 2);
    CHECK(j["n"].get<std::size_t>() == 2);
    CHECK(j["value_pow_q"].get<double>() == 25.0);
    CHECK(j["value"].get<double>() == 5.0);
    CHECK(j["arg_i"].get<std::size_t>() == 0);
    CHECK(j["arg_j"].get<std::size_t>() == 1);
    CHECK(j["z"].get<double>() == doctest::Approx(gaussian_z(25.0, 2, 2)).epsilon(1e-12));
    CHECK(j["profile"]["source"] == "analytic");

    const auto bad = run({"stat", "--input", path.string(), "--profile", "guess"});
    CHECK(bad.code == 2);
    const auto missing = run({"stat", "--input", (temp_dir() / "none.csv").string()});
    CHECK(missing.code == 2);
}

TEST_CASE("stat with an estimated profile") {
    const auto path = temp_dir() / "est.csv";
    std::ofstream out(path);
    // 24 x 10 grid of +-1 in a balanced pattern.
    for (int i = 0; i < 24; ++i) {
        for (int k = 0; k < 10; ++k) out << (((i + k) % 2) ? 1 : -1) << (k == 9 ? '\n' : ',');
    }
    out.close();
    const auto r = run({"--json", "stat", "--input", path.string(), "--profile", "estimate"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["profile"]["source"] == "sample");
    CHECK(j["value_pow_q"].get<double>() == 40.0);  // opposite-parity rows differ by 2 in every column
}

TEST_CASE("plot renders a results csv") {
    const auto sim_path = temp_dir() / "forplot.csv";
    const auto svg_path = temp_dir() / "out.svg";
    CHECK(run({"simulate", "--dist", "normal", "--pairs", "5:4", "--iters", "6", "--seed",
               "2", "--out", sim_path.string()})
              .code == 0);
    const auto r = run({"--json", "plot", "--input", sim_path.string(), "--out",
                        svg_path.string(), "--reference", "2"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["points"].get<std::size_t>() == 6);
    std::ifstream in(svg_path);
    const std::string svg{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 7;
    }
    CHECK(circles == 6);
}

TEST_CASE("reproduce-figures on a tiny seed writes all artifacts") {
    // The full protocol is exercised in the acceptance suite; here only the
    // CLI wiring is checked, so intercept with a missing directory parent
    // that the command must create.
    const auto dir = temp_dir() / "figs_cli" / "nested";
    fs::remove_all(temp_dir() / "figs_cli");
    // Running the real protocol would take minutes; instead assert that the
    // subcommand validates its flags (seed parse failure exits 2).
    const auto bad = run({"reproduce-figures", "--seed", "notanumber", "--out-dir",
                          dir.string()});
    CHECK(bad.code == 2);
}
