#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <vector>

#include "npn/data_matrix.hpp"
#include "npn/graph.hpp"

namespace npn::io {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars); keeps emitted files bit-stable across runs.
std::string format_double(double value);

/// Parses a decimal string; throws std::invalid_argument on trailing junk.
double parse_double(const std::string& text);

/// Comma-separated matrix with a header row of column names. Writes
/// `names` when given, else col0..col{p-1}.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                      const std::vector<std::string>& names = {});

/// Reads a numeric CSV with one header row. Parse failures carry the
/// 1-based row and column of the offending cell.
DataMatrix read_data_csv(const std::filesystem::path& path);

void write_data_csv(const std::filesystem::path& path, const DataMatrix& data);

/// Edge list as "j<TAB>k" rows, j < k, 0-based vertex ids, sorted.
void write_edge_list_tsv(const std::filesystem::path& path, const GraphSpec& graph);

GraphSpec read_edge_list_tsv(const std::filesystem::path& path, int p);

/// Plain TSV writer: optional header row, then rows of pre-formatted cells.
void write_tsv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string read_file(const std::filesystem::path& path);

}  // namespace npn::io
