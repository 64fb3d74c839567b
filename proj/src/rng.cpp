#include "memvol/noise.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>

namespace memvol {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 path_engine(std::uint64_t seed, std::size_t index, std::uint64_t stream) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ splitmix(static_cast<std::uint64_t>(index) * 4 + stream)));
}

}  // namespace

bool is_power_of_two(std::size_t n) { return std::has_single_bit(n); }

BrownianFabric::BrownianFabric(std::uint64_t seed, std::size_t n_fine, std::size_t n_paths, double horizon,
                               bool with_aux)
    : seed_(seed), n_fine_(n_fine), n_paths_(n_paths), horizon_(horizon), with_aux_(with_aux) {
  if (!is_power_of_two(n_fine)) throw std::invalid_argument("fabric: n_fine must be a power of two");
  if (n_paths == 0) throw std::invalid_argument("fabric: need at least one path");
  if (!(horizon > 0.0)) throw std::invalid_argument("fabric: horizon must be positive");
}

void BrownianFabric::fill(std::size_t index, NoisePath& out) const {
  if (index >= n_paths_) throw std::out_of_range("fabric: path index " + std::to_string(index) + " out of range");
  const double sd = std::sqrt(horizon_ / static_cast<double>(n_fine_));
  std::normal_distribution<double> normal;
  auto eng = path_engine(seed_, index, 0);
  out.dW.resize(n_fine_);
  for (double& x : out.dW) x = sd * normal(eng);
  if (with_aux_) {
    auto aux_eng = path_engine(seed_, index, 1);
    normal.reset();
    out.aux.resize(n_fine_);
    for (double& x : out.aux) x = normal(aux_eng);
  } else {
    out.aux.clear();
  }
  auto init_eng = path_engine(seed_, index, 2);
  normal.reset();
  out.xi0_normal = normal(init_eng);
}

NoisePath BrownianFabric::path(std::size_t index) const {
  NoisePath p;
  fill(index, p);
  return p;
}

void coarsen(std::span<const double> fine, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0 || fine.size() % n != 0 || !is_power_of_two(fine.size() / n))
    throw std::invalid_argument("coarsen: " + std::to_string(fine.size()) + " fine increments cannot be reduced to " +
                                std::to_string(n));
  const std::size_t m = fine.size() / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double* block = fine.data() + i * m;
    // Tree reduction with stride doubling; matches repeated halving exactly.
    double buf[64];
    if (m <= 64) {
      for (std::size_t j = 0; j < m; ++j) buf[j] = block[j];
      for (std::size_t w = m; w > 1; w /= 2)
        for (std::size_t j = 0; j < w / 2; ++j) buf[j] = buf[2 * j] + buf[2 * j + 1];
      out[i] = buf[0];
    } else {
      std::vector<double> tmp(block, block + m);
      for (std::size_t w = m; w > 1; w /= 2)
        for (std::size_t j = 0; j < w / 2; ++j) tmp[j] = tmp[2 * j] + tmp[2 * j + 1];
      out[i] = tmp[0];
    }
  }
}

std::vector<double> coarsen(std::span<const double> fine, std::size_t n) {
  std::vector<double> out(n);
  coarsen(fine, out);
  return out;
}

std::uint64_t checksum(std::span<const double> values, std::uint64_t state) {
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      state ^= (bits >> (8 * b)) & 0xffU;
      state *= 0x100000001b3ULL;
    }
  }
  return state;
}

}  // namespace memvol
