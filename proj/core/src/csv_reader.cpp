#include "mapl/csv_reader.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mapl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line, std::size_t column) {
  double value = 0.0;
  // from_chars rejects a leading '+'
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw CsvError(line, "column " + std::to_string(column) + ": cannot parse '" +
                             std::string(field) + "' as a number");
  }
  return value;
}

}  // namespace

RegressionData read_regression_csv(std::istream& in, bool has_header) {
  RegressionData data;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split(view);
    if (header_pending) {
      for (auto f : fields) data.column_names.emplace_back(f);
      width = fields.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw CsvError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t j = 0; j < fields.size(); ++j) row.push_back(parse_number(fields[j], line_no, j + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(line_no, "no data rows");
  if (width < 2) throw CsvError(line_no, "need a response column and at least one predictor");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(width - 1);
  data.y.resize(n);
  data.X.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.y(i) = rows[i][0];
    for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = rows[i][j + 1];
  }
  return data;
}

RegressionData read_regression_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  return read_regression_csv(in, has_header);
}

}  // namespace mapl
