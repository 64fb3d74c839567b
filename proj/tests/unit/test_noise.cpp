#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "memvol/mc.hpp"
#include "memvol/noise.hpp"

using namespace memvol;

TEST_CASE("fabric shape and validation") {
  CHECK_THROWS_AS(make_fabric(1, 100, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_fabric(1, 64, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_fabric(1, 64, 4, 0.0), std::invalid_argument);
  const auto f = make_fabric(1, 64, 4, 1.0);
  CHECK(f.path(0).dW.size() == 64);
  CHECK(f.path(0).aux.empty());
  CHECK(make_fabric(1, 64, 4, 1.0, true).path(3).aux.size() == 64);
  CHECK_THROWS_AS(f.path(4), std::out_of_range);
}

TEST_CASE("paths are keyed by (seed, index) only") {
  const auto small = make_fabric(99, 128, 5, 1.0), large = make_fabric(99, 128, 500, 1.0);
  CHECK(small.path(3).dW == large.path(3).dW);
  CHECK(small.path(3).xi0_normal == large.path(3).xi0_normal);
  CHECK(small.path(3).dW != small.path(4).dW);
  CHECK(make_fabric(100, 128, 5, 1.0).path(3).dW != small.path(3).dW);
  // Requesting aux normals leaves the increments unchanged.
  CHECK(make_fabric(99, 128, 5, 1.0, true).path(3).dW == small.path(3).dW);
}

TEST_CASE("fine increments have variance h") {
  const std::size_t n = 1024, paths = 100;
  const auto f = make_fabric(2024, n, paths, 2.0);
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < paths; ++i)
    for (double x : f.path(i).dW) {
      s += x;
      ss += x * x;
    }
  const double m = double(n * paths), h = 2.0 / double(n);
  const double var = (ss - s * s / m) / (m - 1.0);
  CHECK(std::abs(var - h) <= 3.0 * h * std::sqrt(2.0 / (m - 1.0)));
}

TEST_CASE("coarsening is a pairwise tree") {
  const auto p = make_fabric(5, 256, 1, 1.0).path(0);
  const auto c128 = coarsen(p.dW, 128), c64 = coarsen(p.dW, 64), c8 = coarsen(p.dW, 8);
  for (std::size_t i = 0; i < 64; ++i) CHECK(c128[2 * i] + c128[2 * i + 1] == c64[i]);
  CHECK(coarsen(c64, 8) == c8);
  CHECK(coarsen(p.dW, 256) == p.dW);
  CHECK_THROWS_AS(coarsen(p.dW, 3), std::invalid_argument);
  CHECK_THROWS_AS(coarsen(p.dW, 0), std::invalid_argument);
  double total = 0.0;
  for (double x : p.dW) total += x;
  CHECK(coarsen(p.dW, 1)[0] == doctest::Approx(total).epsilon(1e-13));
}

TEST_CASE("checksum sees every bit") {
  std::vector<double> v{1.0, 2.0, 3.0};
  const auto a = checksum(v);
  v[1] = std::nextafter(2.0, 3.0);
  CHECK(checksum(v) != a);
  CHECK(checksum(std::vector<double>{0.0}) != checksum(std::vector<double>{-0.0}));
}
