#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "memvol/noise.hpp"
#include "memvol/sde.hpp"
#include "memvol/volterra.hpp"

namespace memvol {

BrownianFabric make_fabric(std::uint64_t seed, std::size_t n_fine, std::size_t n_paths, double horizon,
                           bool with_aux = false);

/// Runs body(i) for i in [0, count) on `threads` workers with a static block
/// partition. threads == 0 means hardware concurrency. Rethrows the first exception.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// A scheme that can be run on any dyadic coarsening of a fabric path.
class CoupledScheme {
 public:
  virtual ~CoupledScheme() = default;
  virtual bool needs_aux() const = 0;
  /// Builds per-level caches; must be called before observe, not concurrently with it.
  virtual void prepare(std::span<const std::size_t> levels, std::size_t n_fine, double horizon) = 0;
  /// Values at nodes 0, stride, 2 stride, ... of the n-step run driven by `fine`.
  virtual std::vector<double> observe(const NoisePath& fine, std::size_t n, std::size_t stride) const = 0;
};

/// Euler scheme for the memory process xi.
class XiScheme final : public CoupledScheme {
 public:
  explicit XiScheme(MemoryProcessSpec spec) : spec_(std::move(spec)) {}
  bool needs_aux() const override { return false; }
  void prepare(std::span<const std::size_t> levels, std::size_t n_fine, double horizon) override;
  std::vector<double> observe(const NoisePath& fine, std::size_t n, std::size_t stride) const override;

 private:
  MemoryProcessSpec spec_;
  std::map<std::size_t, std::vector<double>> kappa_;
};

/// Euler scheme for the Volterra process X (any variant).
class XScheme final : public CoupledScheme {
 public:
  explicit XScheme(VolterraSpec spec) : spec_(std::move(spec)) {}
  bool needs_aux() const override { return spec_.variant() == SchemeVariant::kHybridDiffusion; }
  void prepare(std::span<const std::size_t> levels, std::size_t n_fine, double horizon) override;
  std::vector<double> observe(const NoisePath& fine, std::size_t n, std::size_t stride) const override;

 private:
  struct Level {
    std::vector<double> kappa;
    WeightTable weights;
  };
  const Level& level(std::size_t n) const;

  VolterraSpec spec_;
  std::map<std::size_t, Level> levels_;
  std::size_t n_fine_ = 0;
};

enum class ErrorNorm {
  kPathwiseSup,   ///< || sup_k |e_k| ||_p
  kPointwiseSup,  ///< sup_k || e_k ||_p
};

std::string_view to_string(ErrorNorm norm);
ErrorNorm parse_error_norm(std::string_view name);

struct RatePoint {
  std::size_t n = 0;
  double h = 0.0;
  double error = 0.0;
  double se = 0.0;
};

struct StrongErrorOptions {
  double p = 2.0;
  ErrorNorm norm = ErrorNorm::kPathwiseSup;
  unsigned threads = 1;
  std::size_t bootstrap_resamples = 100;
  std::uint64_t bootstrap_seed = 0x5eed;
};

struct StrongErrorResult {
  std::vector<RatePoint> points;  ///< sorted by n
  std::uint64_t noise_checksum = 0;  ///< hash of all fine increments consumed, in path order
};

/// Strong error of `scheme` at each n against the n_ref run on the same fabric paths.
/// Requires fabric.n_fine() == n_ref, n | n_ref with a power-of-two ratio, and n_ref >= 8 max(n).
StrongErrorResult strong_error(CoupledScheme& scheme, const BrownianFabric& fabric, std::span<const std::size_t> n_list,
                               std::size_t n_ref, const StrongErrorOptions& options = {});

struct RateReport {
  std::vector<RatePoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log(error) on log(h).
RateReport fit_rate(std::vector<RatePoint> points);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Sample mean, standard error and normal-approximation interval.
MeanEstimate estimate_mean(std::span<const double> values, double confidence = 0.95);

struct Timing {
  std::string variant;
  std::size_t n = 0;
  double median_seconds = 0.0;
};

/// Median-of-`repeats` wall time per n of the endpoint-only and whole-path X schemes.
std::vector<Timing> bench_endpoint(const VolterraSpec& spec, std::span<const std::size_t> n_list,
                                   std::size_t repeats = 5, std::uint64_t seed = 1);

}  // namespace memvol
