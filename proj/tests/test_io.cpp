#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "maxdist/io.hpp"
#include "maxdist/montecarlo.hpp"

using namespace maxdist;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "maxdist_io_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

SimulationResult tiny_result() {
    SimulationConfig config;
    config.dist = DistributionSpec{NormalDist{}};
    config.pairs = {{10, 8}, {12, 6}};
    config.iterations = 4;
    config.master_seed = 99;
    return run_simulation(config);
}

}  // namespace

TEST_CASE("read_matrix_csv basics") {
    const auto path = write_temp("plain.csv", "0,1.5,2\n3,4,5.25\n");
    const auto m = io::read_matrix_csv(path);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.at(0, 1) == 1.5);
    CHECK(m.at(1, 2) == 5.25);
}

TEST_CASE("read_matrix_csv skips headers and comments") {
    const auto path = write_temp("header.csv",
                                 "# produced by hand\nx1,x2\n1,2\n# midway note\n3,4\n\n");
    const auto m = io::read_matrix_csv(path);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.at(1, 0) == 3.0);

    // Numeric first row is data, not a header.
    const auto data_first = io::read_matrix_csv(write_temp("nohdr.csv", "7,8\n9,10\n"));
    CHECK(data_first.rows() == 2);
    CHECK(data_first.at(0, 0) == 7.0);

    // Scientific notation and signs parse as numeric data.
    const auto sci = io::read_matrix_csv(write_temp("sci.csv", "1e-3,-2.5E+2\n+4,.5\n"));
    CHECK(sci.at(0, 0) == 1e-3);
    CHECK(sci.at(0, 1) == -250.0);
}

TEST_CASE("read_matrix_csv error reporting") {
    const auto ragged = write_temp("ragged.csv", "1,2,3\n4,5\n");
    try {
        io::read_matrix_csv(ragged);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("2 fields") != std::string::npos);
        CHECK(msg.find("expected 3") != std::string::npos);
    }

    const auto nonfinite = write_temp("inf.csv", "1,2\n3,inf\n");
    try {
        io::read_matrix_csv(nonfinite);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }

    CHECK_THROWS_AS(io::read_matrix_csv(write_temp("text.csv", "a,b\nc,d\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::read_matrix_csv(write_temp("empty.csv", "# nothing\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::read_matrix_csv(temp_dir() / "missing.csv"), std::invalid_argument);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.0, -0.0, 1.0, -1.5, 3.141592653589793, 1e-17, 2.2250738585072014e-308,
                     1.7976931348623157e308, 0.1, 2.0000000000000004}) {
        const auto s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("results csv round trips bit-exactly") {
    const auto result = tiny_result();
    const auto path = temp_dir() / "results.csv";
    io::write_results_csv(path, result);
    const auto z = io::read_results_z(path);
    REQUIRE(z.size() == 8);
    std::size_t idx = 0;
    for (const auto& pair_z : result.z_values) {
        for (double v : pair_z) {
            CHECK(z[idx] == v);
            ++idx;
        }
    }
    const auto text = slurp(path);
    CHECK(text.find("# maxdist") != std::string::npos);
    CHECK(text.find("# seed 99") != std::string::npos);
    CHECK(text.find("pair_index,p,n,iteration,z") != std::string::npos);
    CHECK(text.find("\n0,10,8,0,") != std::string::npos);
    CHECK(text.find("\n1,12,6,3,") != std::string::npos);

    const auto single = temp_dir() / "pair1.csv";
    io::write_results_csv_pair(single, result, 1);
    const auto z1 = io::read_results_z(single);
    REQUIRE(z1.size() == 4);
    CHECK(z1[2] == result.z_values[1][2]);
    CHECK_THROWS_AS(io::write_results_csv_pair(single, result, 2), std::out_of_range);
}

TEST_CASE("summary json carries provenance and per-pair stats") {
    const auto result = tiny_result();
    const auto text = io::summary_json(result);
    CHECK(text.find("\"master_seed\": 99") != std::string::npos);
    CHECK(text.find("\"distribution\": \"normal:0:1\"") != std::string::npos);
    CHECK(text.find("\"rng_id\": \"philox4x32-10\"") != std::string::npos);
    CHECK(text.find("\"profile_source\": \"analytic\"") != std::string::npos);
    CHECK(text.find("\"frac_in_band\"") != std::string::npos);
    CHECK(text.find("\"K\": 4") != std::string::npos);
    CHECK(text.find("\"p\": 10") != std::string::npos);
    CHECK(text.find("\"n\": 6") != std::string::npos);
    CHECK(text.back() == '\n');

    const auto path = temp_dir() / "summary.json";
    io::write_summary_json(path, result);
    CHECK(slurp(path) == text);
}

TEST_CASE("scatter svg structure") {
    const std::vector<double> values{1.8, 2.1, 2.0, 1.4, 2.6};
    const auto svg = io::scatter_svg(values, 2.0, "demo");
    CHECK(count_occurrences(svg, "<circle") == values.size());
    CHECK(count_occurrences(svg, "<line") == 1);  // the reference line
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("width=\"700.00\"") != std::string::npos);
    CHECK(svg.find("demo") != std::string::npos);
    CHECK(svg.find("iteration") != std::string::npos);

    CHECK(io::scatter_svg(values, 2.0, "demo") == svg);
    CHECK(io::scatter_svg({2.0}, 2.0, "one").find("<circle") != std::string::npos);
    CHECK_THROWS_AS(io::scatter_svg({}, 2.0, ""), std::invalid_argument);

    const auto path = temp_dir() / "plot.svg";
    io::emit_scatter_svg(values, 2.0, path, "demo");
    CHECK(slurp(path) == svg);
}

TEST_CASE("two-panel svg") {
    const std::vector<double> left{1.9, 2.0, 2.2}, right{2.1, 1.7, 2.3, 2.0};
    const auto path = temp_dir() / "panels.svg";
    io::emit_scatter_pair_svg(left, "(p,n)=(150,100)", right, "(p,n)=(200,200)", 2.0, path);
    const auto svg = slurp(path);
    CHECK(count_occurrences(svg, "<circle") == left.size() + right.size());
    CHECK(count_occurrences(svg, "<line") == 2);
    CHECK(svg.find("width=\"1400.00\"") != std::string::npos);
    CHECK(svg.find("(p,n)=(150,100)") != std::string::npos);
    CHECK(svg.find("(p,n)=(200,200)") != std::string::npos);
}

TEST_CASE("atomic writes leave no temp files") {
    const auto dir = temp_dir() / "atomic";
    fs::create_directories(dir);
    const auto path = dir / "out.txt";
    io::write_file_atomic(path, "first\n");
    io::write_file_atomic(path, "second\n");
    CHECK(slurp(path) == "second\n");
    std::size_t entries = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 1);
}
