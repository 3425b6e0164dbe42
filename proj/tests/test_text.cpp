#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "klsat/text.hpp"

using namespace klsat;

TEST_CASE("fmt_double round-trips and is shortest") {
  CHECK(text::fmt_double(0.0) == "0");
  CHECK(text::fmt_double(1.0) == "1");
  CHECK(text::fmt_double(0.5) == "0.5");
  CHECK(text::fmt_double(-1.75) == "-1.75");
  CHECK(text::fmt_double(0.1) == "0.1");
  double vals[] = {1.0 / 3.0,  std::sqrt(2.0), -0.1,   1e-300,
                   1e300,      6.02214076e23,  0.3,    -2.5e-8,
                   123456.789, 1.0000000000000002};
  for (double v : vals) {
    std::string s = text::fmt_double(v);
    CHECK(text::parse_double(s) == v);
  }
}

TEST_CASE("fmt_double17 round-trips bit-exactly") {
  double vals[] = {M_PI, 1.0 / 3.0, -1e-17, 0.1 + 0.2};
  for (double v : vals)
    CHECK(text::parse_double(text::fmt_double17(v)) == v);
}

TEST_CASE("parse_double accepts plain forms") {
  CHECK(text::parse_double("42") == 42.0);
  CHECK(text::parse_double("-0.25") == -0.25);
  CHECK(text::parse_double("1e3") == 1000.0);
  CHECK(text::parse_double("inf") ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("parse_double rejects junk with the token in the message") {
  CHECK_THROWS_AS(text::parse_double("12x"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_double("1.2.3"), std::invalid_argument);
  try {
    text::parse_double("bogus_token");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("bogus_token") != std::string::npos);
  }
}

TEST_CASE("parse_int and parse_u64") {
  CHECK(text::parse_int("-7") == -7);
  CHECK(text::parse_int("0") == 0);
  CHECK(text::parse_u64("18446744073709551615") == UINT64_MAX);
  CHECK_THROWS_AS(text::parse_int("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_int("x7"), std::invalid_argument);
  CHECK_THROWS_AS(text::parse_u64("-1"), std::invalid_argument);
}

TEST_CASE("trim, split_ws, split") {
  CHECK(text::trim("  a b \t") == "a b");
  CHECK(text::trim("") == "");
  CHECK(text::trim(" \t\r\n") == "");

  auto w = text::split_ws("  one\ttwo   three ");
  REQUIRE(w.size() == 3);
  CHECK(w[0] == "one");
  CHECK(w[1] == "two");
  CHECK(w[2] == "three");
  CHECK(text::split_ws("   ").empty());

  auto p = text::split("a,b,,c", ',');
  REQUIRE(p.size() == 4);
  CHECK(p[0] == "a");
  CHECK(p[2] == "");
  CHECK(p[3] == "c");
  auto single = text::split("abc", ',');
  REQUIRE(single.size() == 1);
  CHECK(single[0] == "abc");
}

TEST_CASE("consume_key") {
  std::string_view v;
  CHECK(text::consume_key("n=42", "n", v));
  CHECK(v == "42");
  CHECK(text::consume_key("seed=0", "seed", v));
  CHECK(v == "0");
  CHECK_FALSE(text::consume_key("seed=", "seed", v));  // empty value
  CHECK_FALSE(text::consume_key("n=42", "m", v));
  CHECK_FALSE(text::consume_key("nn=42", "n", v));
  CHECK_FALSE(text::consume_key("n", "n", v));
}

TEST_CASE("read_file and write_file round-trip") {
  std::string path = "/tmp/klsat_text_test.txt";
  std::string body = "line1\nline2 with spaces\n";
  text::write_file(path, body);
  CHECK(text::read_file(path) == body);
  CHECK_THROWS(text::read_file("/tmp/definitely_missing_klsat_file"));
}
