#include "lrv/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace lrv::io {

namespace {

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!current.empty()) fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) fields.push_back(std::move(current));
  return fields;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

std::vector<double> read_series(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_line = 0;  // first line that is neither blank nor a comment
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    if (header_line == 0 && line.find_first_not_of(" \t\r") != std::string::npos) {
      header_line = line_no;
    }
    for (const auto& field : split_fields(line)) {
      double v = 0.0;
      if (parse_double(field, v)) {
        values.push_back(v);
        seen_data = true;
      } else if (!seen_data && line_no == header_line) {
        continue;  // header
      } else {
        throw std::runtime_error("line " + std::to_string(line_no) + ": not a number: " + field);
      }
    }
  }
  return values;
}

std::vector<double> read_series_file(const std::string& path) {
  auto in = open(path);
  return read_series(in);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    for (const auto& f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) throw std::runtime_error("matrix entry is not a number: " + f);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix file is empty");
  const auto cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::runtime_error("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  auto in = open(path);
  return read_matrix_csv(in);
}

}  // namespace lrv::io
