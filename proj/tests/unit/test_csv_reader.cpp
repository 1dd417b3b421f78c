#include <catch_amalgamated.hpp>

#include <sstream>

#include "mapl/csv_reader.hpp"

using namespace mapl;

namespace {

std::size_t error_line(const std::string& text, bool header) {
  std::istringstream in(text);
  try {
    read_regression_csv(in, header);
  } catch (const CsvError& e) {
    return e.line();
  }
  FAIL("no CsvError");
  return 0;
}

}  // namespace

TEST_CASE("reads header and data") {
  std::istringstream in("\xEF\xBB\xBFy, x1 ,x2\r\n1.5,1,0.25\n\n-2,1,+3e-1\n  4 , 1 , 7\n");
  const RegressionData d = read_regression_csv(in, true);
  REQUIRE(d.y.size() == 3);
  REQUIRE(d.X.rows() == 3);
  REQUIRE(d.X.cols() == 2);
  CHECK(d.column_names == std::vector<std::string>{"y", "x1", "x2"});
  CHECK(d.y(1) == -2.0);
  CHECK(d.X(1, 1) == 0.3);
  CHECK(d.X(2, 1) == 7.0);
}

TEST_CASE("reads without header") {
  std::istringstream in("1,2,3\n4,5,6\n");
  const RegressionData d = read_regression_csv(in, false);
  CHECK(d.column_names.empty());
  CHECK(d.y(0) == 1.0);
  CHECK(d.X(1, 1) == 6.0);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("y,x\n1,2\n3,abc\n", true) == 3);
  CHECK(error_line("1,2\n3,4,5\n", false) == 2);
  CHECK(error_line("1,2\n\n3,\n", false) == 3);
  CHECK(error_line("1,2\n3,nan\n", false) == 2);
  CHECK(error_line("y,x\n", true) == 1);
  CHECK(error_line("1\n2\n", false) == 2);

  std::istringstream in("1,2\n3,x\n");
  try {
    read_regression_csv(in, false);
  } catch (const CsvError& e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(read_regression_csv(std::string("/nonexistent/data.csv"), false), CsvError);
}
