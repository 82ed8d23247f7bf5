#include "npn/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace npn::io {

namespace {

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                      const std::vector<std::string>& names) {
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != matrix.cols())
    io_error(path, "header size does not match column count");
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    if (j) out << ',';
    out << (names.empty() ? "col" + std::to_string(j) : names[j]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
  if (!out) io_error(path, "write failed");
}

DataMatrix read_data_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_error(path, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  DataMatrix data;
  data.names = split(line, ',');
  const auto p = data.names.size();
  if (p == 0) io_error(path, "empty header row");

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != p)
      io_error(path, "row " + std::to_string(line_no) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(p));
    std::vector<double> row(p);
    for (std::size_t j = 0; j < p; ++j) {
      try {
        row[j] = parse_double(cells[j]);
      } catch (const std::exception& e) {
        io_error(path, "row " + std::to_string(line_no) + ", column " +
                           std::to_string(j + 1) + " (" + data.names[j] + "): " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io_error(path, "no data rows");

  data.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) data.values(i, j) = rows[i][j];
  return data;
}

void write_data_csv(const std::filesystem::path& path, const DataMatrix& data) {
  write_matrix_csv(path, data.values, data.names);
}

void write_edge_list_tsv(const std::filesystem::path& path, const GraphSpec& graph) {
  auto out = open_out(path);
  for (const auto& [j, k] : graph.edges) out << j << '\t' << k << '\n';
  if (!out) io_error(path, "write failed");
}

GraphSpec read_edge_list_tsv(const std::filesystem::path& path, int p) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open for reading");
  GraphSpec graph(p);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, '\t');
    if (cells.size() != 2)
      io_error(path, "line " + std::to_string(line_no) + ": expected 'j<TAB>k'");
    try {
      graph.add_edge(std::stoi(cells[0]), std::stoi(cells[1]));
    } catch (const std::exception& e) {
      io_error(path, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return graph;
}

void write_tsv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out << '\t';
      out << header[j];
    }
    out << '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << '\t';
      out << row[j];
    }
    out << '\n';
  }
  if (!out) io_error(path, "write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace npn::io
