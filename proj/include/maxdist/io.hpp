#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maxdist/matrix.hpp"
#include "maxdist/montecarlo.hpp"

namespace maxdist::io {

// Reads a UTF-8 CSV with one sample point per row. A single leading header
// row is auto-detected (any non-numeric field makes the first line a
// header); '#' comment lines are skipped. Throws std::invalid_argument with
// the 1-based line number on ragged rows and with (row, column) on
// non-finite values.
DataMatrix read_matrix_csv(const std::filesystem::path& path);

// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Writes content atomically: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Simulation results CSV: provenance as '#' comments, then the header
// pair_index,p,n,iteration,z. Values carry 17 significant digits.
void write_results_csv(const std::filesystem::path& path, const SimulationResult& result);
// Same schema restricted to one (p, n) pair.
void write_results_csv_pair(const std::filesystem::path& path,
                            const SimulationResult& result, std::size_t pair_index);

// Reads back the z column of a results CSV (any pair mix), in file order.
std::vector<double> read_results_z(const std::filesystem::path& path);

// Per-pair summaries plus provenance as JSON.
std::string summary_json(const SimulationResult& result);
void write_summary_json(const std::filesystem::path& path, const SimulationResult& result);

// Standalone scatter SVG: one point per value (x = iteration index, y =
// value), a horizontal reference line, axis labels, fixed 700x600 viewport.
// Byte-deterministic for given inputs.
std::string scatter_svg(const std::vector<double>& values, double reference,
                        const std::string& title);
void emit_scatter_svg(const std::vector<double>& values, double reference,
                      const std::filesystem::path& path, const std::string& title = "");

// Two scatter panels side by side (1400x600), same construction per panel.
void emit_scatter_pair_svg(const std::vector<double>& left, const std::string& left_title,
                           const std::vector<double>& right, const std::string& right_title,
                           double reference, const std::filesystem::path& path);

}  // namespace maxdist::io
