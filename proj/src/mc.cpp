#include "memvol/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace memvol {

BrownianFabric make_fabric(std::uint64_t seed, std::size_t n_fine, std::size_t n_paths, double horizon,
                           bool with_aux) {
  return BrownianFabric(seed, n_fine, n_paths, horizon, with_aux);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void XiScheme::prepare(std::span<const std::size_t> levels, std::size_t n_fine, double horizon) {
  kappa_.clear();
  kappa_[n_fine] = kappa_table(spec_, PathGrid(n_fine, horizon));
  for (std::size_t n : levels) kappa_[n] = kappa_table(spec_, PathGrid(n, horizon));
}

std::vector<double> XiScheme::observe(const NoisePath& fine, std::size_t n, std::size_t stride) const {
  const auto it = kappa_.find(n);
  if (it == kappa_.end()) throw std::logic_error("XiScheme: level not prepared");
  const PathGrid grid(n, spec_.horizon());
  const std::vector<double> dW = fine.dW.size() == n ? fine.dW : coarsen(fine.dW, n);
  std::vector<double> xi(grid.size());
  euler_xi(spec_, grid, dW, spec_.xi0().from_normal(fine.xi0_normal), it->second, xi);
  std::vector<double> out(n / stride + 1);
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = xi[q * stride];
  return out;
}

void XScheme::prepare(std::span<const std::size_t> levels, std::size_t n_fine, double horizon) {
  levels_.clear();
  n_fine_ = n_fine;
  auto add = [&](std::size_t n) {
    if (levels_.count(n)) return;
    const PathGrid grid(n, horizon);
    levels_.emplace(n, Level{kappa_table(spec_.memory(), grid), WeightTable(spec_.kernel(), spec_.variant(), grid)});
  };
  add(n_fine);
  for (std::size_t n : levels) add(n);
}

const XScheme::Level& XScheme::level(std::size_t n) const {
  const auto it = levels_.find(n);
  if (it == levels_.end()) throw std::logic_error("XScheme: level not prepared");
  return it->second;
}

std::vector<double> XScheme::observe(const NoisePath& fine, std::size_t n, std::size_t stride) const {
  const Level& lv = level(n);
  const PathGrid& grid = lv.weights.grid();
  const std::vector<double> dW = fine.dW.size() == n ? fine.dW : coarsen(fine.dW, n);
  const double xi0 = spec_.memory().xi0().from_normal(fine.xi0_normal);
  std::vector<double> xi(grid.size());
  euler_xi(spec_.memory(), grid, dW, xi0, lv.kappa, xi);
  FrozenCoefficients fc;
  freeze_coefficients(spec_, grid, xi, fc);
  std::vector<double> recent;
  if (needs_aux()) {
    if (fine.aux.size() != fine.dW.size()) throw std::invalid_argument("XScheme: hybrid variant needs aux normals");
    const WeightTable& fw = level(n_fine_).weights;
    recent = recent_integrals(fw, fine.dW, fine.aux);
    if (n != n_fine_) recent = coarse_recent_integrals(fw, fine.dW, recent, n);
  }
  return euler_x_nodes(lv.weights, fc, VolterraNoise{dW, recent}, xi0, stride);
}

std::string_view to_string(ErrorNorm norm) {
  return norm == ErrorNorm::kPathwiseSup ? "pathwise-sup" : "pointwise-sup";
}

ErrorNorm parse_error_norm(std::string_view name) {
  if (name == "pathwise-sup") return ErrorNorm::kPathwiseSup;
  if (name == "pointwise-sup") return ErrorNorm::kPointwiseSup;
  throw std::invalid_argument("unknown error norm '" + std::string(name) + "'");
}

namespace {

// Per-path |error|^p values of one level: one value (pathwise) or one per node.
double level_error(const std::vector<double>& stats, std::size_t paths, std::size_t width, double p,
                   std::span<const std::size_t> sample) {
  const std::size_t m = sample.empty() ? paths : sample.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += stats[(sample.empty() ? i : sample[i]) * width + k];
    worst = std::max(worst, std::pow(acc / static_cast<double>(m), 1.0 / p));
  }
  return worst;
}

}  // namespace

StrongErrorResult strong_error(CoupledScheme& scheme, const BrownianFabric& fabric, std::span<const std::size_t> n_list,
                               std::size_t n_ref, const StrongErrorOptions& options) {
  if (n_list.empty()) throw std::invalid_argument("strong_error: n_list is empty");
  std::vector<std::size_t> levels(n_list.begin(), n_list.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t n_max = levels.back();
  for (std::size_t n : levels)
    if (n == 0 || n_ref % n != 0 || !is_power_of_two(n_ref / n))
      throw std::invalid_argument("strong_error: n = " + std::to_string(n) + " does not divide n_ref = " +
                                  std::to_string(n_ref) + " by a power of two");
  if (n_ref < 8 * n_max) throw std::invalid_argument("strong_error: n_ref must be at least 8 * max(n_list)");
  if (fabric.n_fine() != n_ref) throw std::invalid_argument("strong_error: fabric resolution differs from n_ref");
  if (scheme.needs_aux() && !fabric.with_aux())
    throw std::invalid_argument("strong_error: scheme needs auxiliary normals the fabric does not provide");
  if (!(options.p >= 1.0)) throw std::invalid_argument("strong_error: p must be at least 1");

  scheme.prepare(levels, n_ref, fabric.horizon());
  const std::size_t paths = fabric.n_paths();
  const bool pointwise = options.norm == ErrorNorm::kPointwiseSup;

  std::vector<std::size_t> width(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) width[j] = pointwise ? levels[j] + 1 : 1;
  std::vector<std::vector<double>> stats(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) stats[j].assign(paths * width[j], 0.0);
  std::vector<std::uint64_t> ref_sums(paths), coarse_sums(paths);

  parallel_for(paths, options.threads, [&](std::size_t i) {
    NoisePath noise;
    fabric.fill(i, noise);
    ref_sums[i] = checksum(noise.dW);
    const std::vector<double> ref = scheme.observe(noise, n_ref, n_ref / n_max);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const std::size_t n = levels[j];
      const std::vector<double> coarse = scheme.observe(noise, n, 1);
      const std::size_t step = n_max / n;
      double* row = stats[j].data() + i * width[j];
      for (std::size_t k = 0; k <= n; ++k) {
        const double e = std::pow(std::abs(coarse[k] - ref[k * step]), options.p);
        if (pointwise) row[k] = e;
        else row[0] = std::max(row[0], e);
      }
    }
    coarse_sums[i] = checksum(noise.dW);
  });

  StrongErrorResult result;
  for (std::size_t i = 0; i < paths; ++i) {
    if (ref_sums[i] != coarse_sums[i]) throw std::logic_error("strong_error: coarse and reference noise diverged");
    result.noise_checksum = result.noise_checksum * 0x100000001b3ULL ^ ref_sums[i];
  }

  std::mt19937_64 boot(options.bootstrap_seed);
  std::uniform_int_distribution<std::size_t> pick(0, paths - 1);
  std::vector<std::vector<double>> resampled(levels.size());
  std::vector<std::size_t> sample(paths);
  for (std::size_t b = 0; b < options.bootstrap_resamples; ++b) {
    for (auto& s : sample) s = pick(boot);
    for (std::size_t j = 0; j < levels.size(); ++j)
      resampled[j].push_back(level_error(stats[j], paths, width[j], options.p, sample));
  }

  for (std::size_t j = 0; j < levels.size(); ++j) {
    RatePoint pt;
    pt.n = levels[j];
    pt.h = fabric.horizon() / static_cast<double>(levels[j]);
    pt.error = level_error(stats[j], paths, width[j], options.p, {});
    if (resampled[j].size() >= 2) pt.se = estimate_mean(resampled[j]).se * std::sqrt(double(resampled[j].size()));
    result.points.push_back(pt);
  }
  return result;
}

RateReport fit_rate(std::vector<RatePoint> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  std::sort(points.begin(), points.end(), [](const RatePoint& a, const RatePoint& b) { return a.n < b.n; });
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    if (!(p.error > 0.0) || !(p.h > 0.0)) throw std::invalid_argument("fit_rate: errors and steps must be positive");
    sx += std::log(p.h);
    sy += std::log(p.error);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.h) - mx, dy = std::log(p.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all step sizes are equal");
  RateReport r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  r.points = std::move(points);
  return r;
}

MeanEstimate estimate_mean(std::span<const double> values, double confidence) {
  if (values.size() < 2) throw std::invalid_argument("estimate_mean: need at least 2 values");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("estimate_mean: confidence must be in (0, 1)");
  const double m = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / m;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
  return {mean, se, mean - z * se, mean + z * se};
}

namespace {

using Clock = std::chrono::steady_clock;

// Median over `repeats` samples; each sample batches enough calls to span
// about two milliseconds so that tiny problems still time reliably.
template <class F>
double median_time(std::size_t repeats, F&& run) {
  run();  // warm-up
  auto t0 = Clock::now();
  run();
  const double single = std::max(1e-9, std::chrono::duration<double>(Clock::now() - t0).count());
  const auto inner = static_cast<std::size_t>(std::clamp(2e-3 / single, 1.0, 1e6));
  std::vector<double> samples;
  for (std::size_t r = 0; r < repeats; ++r) {
    t0 = Clock::now();
    for (std::size_t i = 0; i < inner; ++i) run();
    samples.push_back(std::chrono::duration<double>(Clock::now() - t0).count() / static_cast<double>(inner));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

std::vector<Timing> bench_endpoint(const VolterraSpec& spec, std::span<const std::size_t> n_list, std::size_t repeats,
                                   std::uint64_t seed) {
  if (repeats == 0) throw std::invalid_argument("bench_endpoint: repeats must be positive");
  std::vector<Timing> out;
  const double T = spec.memory().horizon();
  const bool hybrid = spec.variant() == SchemeVariant::kHybridDiffusion;
  for (std::size_t n : n_list) {
    if (n == 0) throw std::invalid_argument("bench_endpoint: n must be positive");
    const PathGrid grid(n, T);
    const WeightTable w(spec.kernel(), spec.variant(), grid);
    const std::vector<double> kappa = kappa_table(spec.memory(), grid);
    std::mt19937_64 eng(seed ^ n);
    std::normal_distribution<double> normal;
    std::vector<double> dW(n), z(n);
    for (double& x : dW) x = std::sqrt(grid.step()) * normal(eng);
    for (double& x : z) x = normal(eng);
    const std::vector<double> recent = hybrid ? recent_integrals(w, dW, z) : std::vector<double>{};
    const double xi0 = spec.memory().xi0().mean;
    std::vector<double> xi(grid.size());
    FrozenCoefficients fc;
    volatile double sink = 0.0;

    auto endpoint = [&] {
      euler_xi(spec.memory(), grid, dW, xi0, kappa, xi);
      freeze_coefficients(spec, grid, xi, fc);
      sink = sink + euler_x_at(w, fc, VolterraNoise{dW, recent}, xi0, n);
    };
    auto whole = [&] {
      euler_xi(spec.memory(), grid, dW, xi0, kappa, xi);
      freeze_coefficients(spec, grid, xi, fc);
      sink = sink + euler_x_nodes(w, fc, VolterraNoise{dW, recent}, xi0, 1).back();
    };
    out.push_back({"endpoint", n, median_time(repeats, endpoint)});
    out.push_back({"whole-path", n, median_time(repeats, whole)});
  }
  return out;
}

}  // namespace memvol
