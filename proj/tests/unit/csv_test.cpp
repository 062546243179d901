#include <doctest.h>

#include <cmath>
#include <limits>

#include <netfp/csv.hpp>

using namespace netfp;

TEST_CASE("split keeps empty fields") {
  auto fields = csv::split("a,,b");
  REQUIRE(fields.size() == 3);
  CHECK(fields[0] == "a");
  CHECK(fields[1] == "");
  CHECK(fields[2] == "b");
  CHECK(csv::split("").size() == 1);
  CHECK(csv::split("x").size() == 1);
}

TEST_CASE("lines handles LF, CRLF, and trailing newline") {
  auto got = csv::lines("a\r\nb\nc\n");
  REQUIRE(got.size() == 3);
  CHECK(got[0] == "a");
  CHECK(got[1] == "b");
  CHECK(got[2] == "c");
  CHECK(csv::lines("").empty());
  CHECK(csv::lines("one").size() == 1);
}

TEST_CASE("numeric parsers are strict") {
  CHECK(csv::parse_int64("-42", "t") == -42);
  CHECK(csv::parse_uint64("42", "t") == 42);
  CHECK(csv::parse_double("1.5", "t") == 1.5);
  CHECK_THROWS(csv::parse_int64("4x", "t"));
  CHECK_THROWS(csv::parse_uint64("", "t"));
  CHECK_THROWS(csv::parse_double("1.5.2", "t"));
  CHECK_THROWS(csv::parse_double(" 1", "t"));
}

TEST_CASE("format_double round-trips exactly") {
  const double cases[] = {0.0,
                          1.0,
                          -1.0,
                          0.1,
                          1.0 / 3.0,
                          2048.0,
                          1e-300,
                          -7.25e200,
                          std::sqrt(2.0),
                          std::numeric_limits<double>::denorm_min()};
  for (double value : cases) {
    std::string text = csv::format_double(value);
    CHECK(csv::parse_double(text, "t") == value);
  }
  CHECK(csv::parse_double(csv::format_double(
            std::numeric_limits<double>::infinity()), "t") ==
        std::numeric_limits<double>::infinity());
  CHECK(csv::parse_double(csv::format_double(
            -std::numeric_limits<double>::infinity()), "t") ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("format_double carries 17 significant digits") {
  // 0.5 prints with its full mantissa, not a shortest form.
  std::string text = csv::format_double(0.5);
  CHECK(text == "5.0000000000000000e-01");
  CHECK(csv::format_double(0.1) == "1.0000000000000001e-01");
}
