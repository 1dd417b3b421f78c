#pragma once

// Regression data from CSV: first column is the response, remaining columns
// form the model matrix. UTF-8, comma separated, optional header row.

#include <Eigen/Dense>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapl {

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct RegressionData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;  // empty without a header
};

RegressionData read_regression_csv(std::istream& in, bool has_header);
RegressionData read_regression_csv(const std::string& path, bool has_header);

}  // namespace mapl
