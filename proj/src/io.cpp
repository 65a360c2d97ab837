#include "maxdist/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maxdist/version.hpp"

namespace maxdist::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_field(const std::string& field, double& out) {
    if (field.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(field, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == field.size();
}

const char* source_name(ProfileSource source) {
    switch (source) {
        case ProfileSource::Analytic: return "analytic";
        case ProfileSource::MonteCarloEstimate: return "montecarlo";
        case ProfileSource::SampleEstimate: return "sample";
    }
    return "unknown";
}

std::string provenance_comments(const SimulationResult& result) {
    std::string out;
    out += "# maxdist " + std::string(kVersion) + "\n";
    out += "# rng " + result.rng_id + "\n";
    out += "# seed " + std::to_string(result.master_seed) + "\n";
    out += "# dist " + result.distribution + "\n";
    out += "# q " + format_double(result.q) + "\n";
    out += "# profile " + std::string(source_name(result.profile_source)) + "\n";
    return out;
}

void append_pair_rows(std::string& out, const SimulationResult& result, std::size_t pi) {
    const PairSummary& s = result.summaries[pi];
    for (std::size_t it = 0; it < result.z_values[pi].size(); ++it) {
        out += std::to_string(pi) + "," + std::to_string(s.p) + "," + std::to_string(s.n) +
               "," + std::to_string(it) + "," + format_double(result.z_values[pi][it]) + "\n";
    }
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// One scatter panel's inner markup, origin at (ox, 0) in a 700x600 cell.
std::string scatter_panel(const std::vector<double>& values, double reference,
                          const std::string& title, double ox) {
    const double left = ox + 70.0, right = ox + 660.0, top = 50.0, bottom = 550.0;
    double lo = reference, hi = reference;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.08 * (hi - lo);
    lo -= pad;
    hi += pad;
    const double xmax = values.size() > 1 ? double(values.size() - 1) : 1.0;
    const auto sx = [&](double i) { return left + (right - left) * i / xmax; };
    const auto sy = [&](double v) { return bottom - (bottom - top) * (v - lo) / (hi - lo); };

    std::string svg;
    // Axes and ticks as one path so the reference line is the only <line>.
    std::string axis = "M" + fixed2(left) + "," + fixed2(bottom) + " L" + fixed2(right) + "," +
                       fixed2(bottom) + " M" + fixed2(left) + "," + fixed2(bottom) + " L" +
                       fixed2(left) + "," + fixed2(top);
    std::string labels;
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        const double y = sy(v);
        axis += " M" + fixed2(left - 5.0) + "," + fixed2(y) + " L" + fixed2(left) + "," +
                fixed2(y);
        labels += "<text x=\"" + fixed2(left - 9.0) + "\" y=\"" + fixed2(y + 4.0) +
                  "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" +
                  fixed2(v) + "</text>\n";
        const double i = xmax * k / 4.0;
        const double xx = sx(i);
        axis += " M" + fixed2(xx) + "," + fixed2(bottom) + " L" + fixed2(xx) + "," +
                fixed2(bottom + 5.0);
        labels += "<text x=\"" + fixed2(xx) + "\" y=\"" + fixed2(bottom + 20.0) +
                  "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
                  fixed2(i) + "</text>\n";
    }
    svg += "<path d=\"" + axis + "\" stroke=\"black\" fill=\"none\"/>\n";
    svg += labels;
    svg += "<text x=\"" + fixed2((left + right) / 2.0) + "\" y=\"" + fixed2(bottom + 40.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">iteration"
           "</text>\n";
    svg += "<text x=\"" + fixed2(ox + 18.0) + "\" y=\"" + fixed2((top + bottom) / 2.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 " +
           fixed2(ox + 18.0) + " " + fixed2((top + bottom) / 2.0) + ")\">z</text>\n";
    if (!title.empty()) {
        svg += "<text x=\"" + fixed2((left + right) / 2.0) +
               "\" y=\"28.00\" font-size=\"16\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">" +
               title + "</text>\n";
    }
    svg += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(sy(reference)) + "\" x2=\"" +
           fixed2(right) + "\" y2=\"" + fixed2(sy(reference)) +
           "\" stroke=\"#c22\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        svg += "<circle cx=\"" + fixed2(sx(double(i))) + "\" cy=\"" + fixed2(sy(values[i])) +
               "\" r=\"2.5\" fill=\"#26c\" fill-opacity=\"0.75\"/>\n";
    }
    return svg;
}

std::string svg_document(double width, double height, const std::string& body) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(width) +
           "\" height=\"" + fixed2(height) + "\" viewBox=\"0 0 " + fixed2(width) + " " +
           fixed2(height) + "\">\n";
    out += "<rect width=\"" + fixed2(width) + "\" height=\"" + fixed2(height) +
           "\" fill=\"white\"/>\n";
    out += body;
    out += "</svg>\n";
    return out;
}

}  // namespace

DataMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool saw_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto fields = split_csv(stripped);

        std::vector<double> row(fields.size());
        bool numeric = true;
        std::size_t bad_col = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_field(fields[c], row[c])) {
                numeric = false;
                bad_col = c;
                break;
            }
        }
        if (!saw_content) {
            saw_content = true;
            if (!numeric) continue;  // single auto-detected header row
        } else if (!numeric) {
            throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                        ", column " + std::to_string(bad_col + 1) +
                                        ": not a number: '" + fields[bad_col] + "'");
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                        " has " + std::to_string(row.size()) +
                                        " fields, expected " + std::to_string(width));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) {
                throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                            ", column " + std::to_string(c + 1) +
                                            ": non-finite value");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument(path.string() + ": no data rows");
    return DataMatrix::from_rows(rows);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_results_csv(const std::filesystem::path& path, const SimulationResult& result) {
    std::string out = provenance_comments(result);
    out += "pair_index,p,n,iteration,z\n";
    for (std::size_t pi = 0; pi < result.z_values.size(); ++pi) {
        append_pair_rows(out, result, pi);
    }
    write_file_atomic(path, out);
}

void write_results_csv_pair(const std::filesystem::path& path, const SimulationResult& result,
                            std::size_t pair_index) {
    if (pair_index >= result.z_values.size()) {
        throw std::out_of_range("results: pair_index out of range");
    }
    std::string out = provenance_comments(result);
    out += "pair_index,p,n,iteration,z\n";
    append_pair_rows(out, result, pair_index);
    write_file_atomic(path, out);
}

std::vector<double> read_results_z(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    std::vector<double> out;
    std::string line;
    std::size_t z_col = 4;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto fields = split_csv(stripped);
        if (!header_seen) {
            header_seen = true;
            const auto it = std::find(fields.begin(), fields.end(), "z");
            z_col = it != fields.end() ? std::size_t(it - fields.begin()) : fields.size() - 1;
            continue;
        }
        if (fields.size() <= z_col) {
            throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                        " has no z column");
        }
        double v = 0.0;
        if (!parse_field(fields[z_col], v)) {
            throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) +
                                        ": bad z value '" + fields[z_col] + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::string summary_json(const SimulationResult& result) {
    nlohmann::json j;
    j["provenance"] = {
        {"master_seed", result.master_seed},
        {"distribution", result.distribution},
        {"q", result.q},
        {"profile_source", source_name(result.profile_source)},
        {"rng_id", result.rng_id},
        {"version", kVersion},
        {"corr_condition_holds", result.corr_condition_holds},
        {"condition_note", result.condition_note},
    };
    j["provenance"]["profile"] = {
        {"mu", result.profile.mu},         {"m2", result.profile.m2},
        {"m4", result.profile.m4},         {"q", result.profile.q},
        {"pair_mean_q", result.profile.pair_mean_q},
        {"pair_var_q", result.profile.pair_var_q},
        {"rho", result.profile.rho},       {"pair_sum_var", result.profile.pair_sum_var},
        {"source", source_name(result.profile.source)},
    };
    j["pairs"] = nlohmann::json::array();
    for (const auto& s : result.summaries) {
        j["pairs"].push_back({
            {"p", s.p},
            {"n", s.n},
            {"K", s.iterations},
            {"mean", s.mean},
            {"sd", s.sd},
            {"min", s.min},
            {"max", s.max},
            {"frac_in_band", s.frac_in_band},
        });
    }
    return j.dump(2) + "\n";
}

void write_summary_json(const std::filesystem::path& path, const SimulationResult& result) {
    write_file_atomic(path, summary_json(result));
}

std::string scatter_svg(const std::vector<double>& values, double reference,
                        const std::string& title) {
    if (values.empty()) throw std::invalid_argument("scatter: need at least one value");
    return svg_document(700.0, 600.0, scatter_panel(values, reference, title, 0.0));
}

void emit_scatter_svg(const std::vector<double>& values, double reference,
                      const std::filesystem::path& path, const std::string& title) {
    write_file_atomic(path, scatter_svg(values, reference, title));
}

void emit_scatter_pair_svg(const std::vector<double>& left, const std::string& left_title,
                           const std::vector<double>& right, const std::string& right_title,
                           double reference, const std::filesystem::path& path) {
    if (left.empty() || right.empty()) {
        throw std::invalid_argument("scatter: need at least one value per panel");
    }
    std::string body = scatter_panel(left, reference, left_title, 0.0);
    body += scatter_panel(right, reference, right_title, 700.0);
    write_file_atomic(path, svg_document(1400.0, 600.0, body));
}

}  // namespace maxdist::io
