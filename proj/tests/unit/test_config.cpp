#include <doctest.h>

#include <filesystem>

#include "memvol/cli/config.hpp"

using namespace memvol::cli;

TEST_CASE("typed lookups") {
  const Config c = Config::parse(
      "[run]\nseed = 42\nhorizon = 2.5\n[rates]\nn_list = 16, 32,64\nH = 0.1,0.3\nnorm = pointwise-sup\n"
      "[simulate]\nindependent_asset_driver = true\nprocesses = Y,Z\n");
  CHECK(c.integer("run", "seed") == 42);
  CHECK(c.real("run", "horizon") == 2.5);
  CHECK(c.integers("rates", "n_list") == std::vector<std::size_t>{16, 32, 64});
  CHECK(c.reals("rates", "H") == std::vector<double>{0.1, 0.3});
  CHECK(c.str("rates", "norm") == "pointwise-sup");
  CHECK(c.boolean("simulate", "independent_asset_driver"));
  CHECK(c.strings("simulate", "processes") == std::vector<std::string>{"Y", "Z"});
  CHECK(c.real("run", "missing", 7.0) == 7.0);
  CHECK(c.has_section("rates"));
  CHECK_FALSE(c.has_section("bench"));
  CHECK(c.has("run", "seed"));
  CHECK_FALSE(c.has("run", "threads"));
  CHECK_THROWS_AS(c.real("run", "missing"), ValidationError);
  CHECK(Config::parse("[a]\nlist =\n").integers("a", "list").empty());
}

TEST_CASE("text is kept verbatim") {
  const std::string text = "# comment\n[run]\nseed=3   \n\n";
  CHECK(Config::parse(text).text() == text);
}

TEST_CASE("strict validation") {
  const Config c = Config::parse("[run]\nseed = 1\nsede = 2\n[extra]\nx = 1\n");
  CHECK_THROWS_AS(c.allow_sections({"run"}), ValidationError);
  CHECK_NOTHROW(c.allow_sections({"run", "extra"}));
  CHECK_THROWS_AS(c.allow_keys("run", {"seed"}), ValidationError);
  CHECK_NOTHROW(c.allow_keys("missing", {"seed"}));
  CHECK_THROWS_AS(Config::parse("seed = 1\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("[run]\nseed = 1\nseed = 2\n"), ValidationError);
  CHECK_THROWS_AS(Config::parse("[run\nseed = 1\n"), ValidationError);
  const Config bad = Config::parse("[a]\nx = 1.5e\ny = -3\nz = maybe\nw = 1,,2\nv = 1e999\n");
  CHECK_THROWS_AS(bad.real("a", "x"), ValidationError);
  CHECK_THROWS_AS(bad.integer("a", "y"), ValidationError);
  CHECK_THROWS_AS(bad.boolean("a", "z"), ValidationError);
  CHECK_THROWS_AS(bad.reals("a", "w"), ValidationError);
  CHECK_THROWS_AS(bad.real("a", "v"), ValidationError);
  CHECK_THROWS_AS(Config::load("/nonexistent/config.ini"), IoError);
}

TEST_CASE("token parsers") {
  CHECK(parse_real(" 0.25 ", "x") == 0.25);
  CHECK(parse_real("-1e-3", "x") == -1e-3);
  CHECK(parse_integer("8192", "n") == 8192);
  CHECK_THROWS_AS(parse_real("", "x"), ValidationError);
  CHECK_THROWS_AS(parse_real("nan", "x"), ValidationError);
  CHECK_THROWS_AS(parse_integer("1.0", "n"), ValidationError);
  CHECK_THROWS_AS(parse_integer("12a", "n"), ValidationError);
}
