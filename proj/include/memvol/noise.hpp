#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace memvol {

/// Increments of one Monte Carlo path on the finest grid.
struct NoisePath {
  std::vector<double> dW;   ///< n_fine Brownian increments, variance h_fine each
  std::vector<double> aux;  ///< n_fine independent standard normals (empty unless requested)
  double xi0_normal = 0.0;  ///< standard normal used to draw xi^0 for this path
};

/// Seeded source of per-path Brownian increments on a dyadic fine grid.
///
/// Path i is generated from its own engine keyed by (seed, i), so the noise of a
/// path does not depend on how many paths exist or which thread draws it.
class BrownianFabric {
 public:
  BrownianFabric(std::uint64_t seed, std::size_t n_fine, std::size_t n_paths, double horizon, bool with_aux);

  std::uint64_t seed() const { return seed_; }
  std::size_t n_fine() const { return n_fine_; }
  std::size_t n_paths() const { return n_paths_; }
  double horizon() const { return horizon_; }
  bool with_aux() const { return with_aux_; }

  NoisePath path(std::size_t index) const;
  /// Allocation-reusing variant.
  void fill(std::size_t index, NoisePath& out) const;

 private:
  std::uint64_t seed_;
  std::size_t n_fine_;
  std::size_t n_paths_;
  double horizon_;
  bool with_aux_;
};

/// Sums consecutive blocks of fine increments down to n coarse ones.
///
/// The reduction is a pairwise tree, so coarsening in one go or level by level
/// gives bit-identical results. fine.size() / n must be a power of two.
std::vector<double> coarsen(std::span<const double> fine, std::size_t n);
void coarsen(std::span<const double> fine, std::span<double> out);

/// FNV-1a over the bit patterns of a span of doubles.
std::uint64_t checksum(std::span<const double> values, std::uint64_t state = 0xcbf29ce484222325ULL);

bool is_power_of_two(std::size_t n);

}  // namespace memvol
