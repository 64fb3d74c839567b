#include <doctest.h>

#include <stdexcept>

#include "memvol/grid.hpp"

using namespace memvol;

TEST_CASE("PathGrid nodes") {
  const PathGrid g(8, 2.0);
  CHECK(g.size() == 9);
  CHECK(g.step() == 0.25);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(8) == 2.0);
  CHECK(g.times()[3] == 0.75);
  CHECK_THROWS_AS(PathGrid(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(4, -1.0), std::invalid_argument);
}

TEST_CASE("SamplePath size is tied to its grid") {
  const PathGrid g(4, 1.0);
  CHECK_THROWS_AS(SamplePath(g, {1.0, 2.0}), std::invalid_argument);
  const SamplePath p = sample(g, [](double t) { return 2.0 * t; });
  CHECK(p[4] == 2.0);
  SamplePath q = p;
  q[2] += 0.5;
  CHECK(max_abs_diff(p, q) == 0.5);
  CHECK(max_abs_diff(p, q, 3) == 0.0);
  CHECK_THROWS_AS(max_abs_diff(p, SamplePath(PathGrid(4, 2.0))), std::invalid_argument);
}
