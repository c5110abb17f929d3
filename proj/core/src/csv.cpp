#include "distq/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "distq/error.hpp"

namespace distq {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::InvalidArgument, "csv::write_file_atomic",
                  "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out)
      throw Error(ErrorKind::InvalidArgument, "csv::write_file_atomic", "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::InvalidArgument, "csv::write_file_atomic",
                "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

namespace {

bool parse_number(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

}  // namespace

TwoColumn read_two_column_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::InvalidArgument, "csv::read_two_column_csv", "cannot open " + path.string());
  TwoColumn table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    double a = 0.0, b = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse_number(std::string_view(line).substr(0, comma), a) &&
                    parse_number(std::string_view(line).substr(comma + 1), b);
    if (!ok) {
      if (table.first.empty() && lineno == 1) continue;
      throw Error(ErrorKind::InvalidArgument, "csv::read_two_column_csv",
                  path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    table.first.push_back(a);
    table.second.push_back(b);
  }
  return table;
}

std::string two_column_csv(const std::string& header_a, const std::string& header_b,
                           const std::vector<double>& a, const std::vector<double>& b) {
  std::string out = header_a + ',' + header_b + '\n';
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    out += format_number(a[i]) + ',' + format_number(b[i]) + '\n';
  return out;
}

}  // namespace distq
