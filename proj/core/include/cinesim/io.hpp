#pragma once

#include "cinesim/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim::io {

std::string read_file(const std::filesystem::path& path);

/// Writes atomically enough for our purposes: parent directories are created.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::string sha256_hex(std::string_view data);

/// Splits one CSV record honoring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// Splits text into lines, dropping '\r' and a trailing empty line.
std::vector<std::string> split_lines(std::string_view text);

/// A matrix whose rows and columns carry string labels. The on-disk layout is
///   movie_id,<col_0>,...,<col_D-1>
///   <row_id>,v,...,v
struct LabeledMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> column_names;
  Matrix values;
};

std::string to_csv(const LabeledMatrix& m);
LabeledMatrix labeled_matrix_from_csv(std::string_view text);

void write_labeled_matrix(const std::filesystem::path& path, const LabeledMatrix& m);
LabeledMatrix read_labeled_matrix(const std::filesystem::path& path);

/// Plain row-major numeric CSV without labels.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(std::string_view text);

}  // namespace cinesim::io
