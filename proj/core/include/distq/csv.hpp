#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace distq {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct TwoColumn {
  std::vector<double> first;
  std::vector<double> second;
};

/// Reads a two-column numeric CSV. A non-numeric first row is taken as a
/// header and skipped.
TwoColumn read_two_column_csv(const std::filesystem::path& path);

std::string two_column_csv(const std::string& header_a, const std::string& header_b,
                           const std::vector<double>& a, const std::vector<double>& b);

}  // namespace distq
