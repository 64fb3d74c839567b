#include "memvol/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "memvol/cli/csv.hpp"
#include "memvol/mc.hpp"
#include "memvol/roughvol.hpp"

namespace memvol::cli {

namespace {

void check_layout(const Config& c) {
  c.allow_sections({"run", "kernel", "coefficients", "xi0", "roughvol", "simulate", "rates", "kernel_check", "bench"});
  c.allow_keys("run", {"seed", "horizon"});
  c.allow_keys("kernel", {"kind", "c", "alpha", "rho"});
  c.allow_keys("coefficients", {"drift_mu", "drift_lambda", "diffusion", "sigma", "va", "vb", "vc"});
  c.allow_keys("xi0", {"mean", "stddev"});
  c.allow_keys("roughvol", {"a", "b", "c", "lambda", "mu", "H", "xi0", "r", "s0", "T", "n"});
  c.allow_keys("simulate", {"model", "scheme", "variant", "processes", "paths", "n", "independent_asset_driver"});
  c.allow_keys("rates", {"process", "H", "n_list", "n_ref", "paths", "p", "norm", "variant"});
  c.allow_keys("kernel_check", {"t_min", "t_max", "points", "laplace_t_min", "laplace_t_max", "laplace_points",
                                "method", "convolution_tolerance", "laplace_tolerance"});
  c.allow_keys("bench", {"n_list", "repeats", "variant"});
}

template <class F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  } catch (const std::domain_error& e) {
    throw ValidationError(e.what());
  }
}

std::uint64_t seed_of(const Config& c, const RunOptions& o) { return o.seed ? *o.seed : c.integer("run", "seed", 1); }

double horizon_of(const Config& c) {
  const double T = c.real("run", "horizon", 1.0);
  if (!(T > 0.0)) throw ValidationError("[run] horizon must be positive");
  return T;
}

Kernel kernel_of(const Config& c, std::optional<double> alpha_override = {}) {
  const auto kind = validated([&] { return parse_kernel_kind(c.str("kernel", "kind", "fractional")); });
  const double c0 = c.real("kernel", "c", 1.0);
  const bool unit_alpha = kind == KernelKind::kConstant || kind == KernelKind::kExponential;
  const double alpha = alpha_override ? *alpha_override : c.real("kernel", "alpha", unit_alpha ? 1.0 : 0.6);
  const double rho = c.real("kernel", "rho", 0.0);
  return validated([&] { return Kernel::make(kind, c0, alpha, rho); });
}

Coefficients coefficients_of(const Config& c) {
  const double mu = c.real("coefficients", "drift_mu", 2.0);
  const double lambda = c.real("coefficients", "drift_lambda", 1.2);
  const std::string diffusion = c.str("coefficients", "diffusion", "sigma_v");
  Coefficients k;
  k.drift = [mu, lambda](double, double x) { return mu - lambda * x; };
  k.lip_drift = std::abs(lambda);
  k.gamma = 1.0;
  if (diffusion == "zero") {
    k.diffusion = [](double, double) { return 0.0; };
  } else if (diffusion == "constant") {
    const double s = c.real("coefficients", "sigma", 1.0);
    k.diffusion = [s](double, double) { return s; };
  } else if (diffusion == "sigma_v") {
    RoughVolParams p;
    p.a = c.real("coefficients", "va", p.a);
    p.b = c.real("coefficients", "vb", p.b);
    p.c = c.real("coefficients", "vc", p.c);
    if (!(p.a > 0.0) || !(p.b >= 0.0) || !(p.c >= 0.0))
      throw ValidationError("[coefficients] sigma_v needs va > 0 and vb, vc >= 0");
    k.diffusion = [p](double, double x) { return sigma_v(x, p); };
    k.lip_diffusion = std::sqrt(p.a);
  } else {
    throw ValidationError("[coefficients] diffusion must be zero, constant or sigma_v");
  }
  return k;
}

InitialCondition xi0_of(const Config& c) {
  InitialCondition ic{c.real("xi0", "mean", 2.0 / 1.2), c.real("xi0", "stddev", 0.0)};
  if (!(ic.stddev >= 0.0)) throw ValidationError("[xi0] stddev must be nonnegative");
  return ic;
}

RoughVolParams roughvol_of(const Config& c) {
  RoughVolParams p;
  p.a = c.real("roughvol", "a", p.a);
  p.b = c.real("roughvol", "b", p.b);
  p.c = c.real("roughvol", "c", p.c);
  p.lambda = c.real("roughvol", "lambda", p.lambda);
  p.mu = c.real("roughvol", "mu", p.mu);
  p.H = c.real("roughvol", "H", p.H);
  p.xi0 = c.real("roughvol", "xi0", p.mu / p.lambda);
  p.r = c.real("roughvol", "r", p.r);
  p.s0 = c.real("roughvol", "s0", p.s0);
  p.T = c.real("roughvol", "T", p.T);
  p.n = c.integer("roughvol", "n", p.n);
  validated([&] {
    p.validate();
    return 0;
  });
  return p;
}

std::size_t positive(std::uint64_t v, std::string_view what) {
  if (v == 0) throw ValidationError(std::string(what) + " must be positive");
  return static_cast<std::size_t>(v);
}

void prepare_out(const Config& c, const RunOptions& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec || !std::filesystem::is_directory(o.out))
    throw IoError("cannot create output directory " + o.out.string() + (ec ? ": " + ec.message() : ""));
  write_text(o.out / "config.ini", c.text());
}

CsvTable path_table(const PathGrid& grid, const std::vector<std::vector<double>>& paths) {
  CsvTable t;
  t.header.push_back("t");
  for (std::size_t i = 0; i < paths.size(); ++i) t.header.push_back("path_" + std::to_string(i));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<std::string> row{format_double(grid.time(k))};
    for (const auto& p : paths) row.push_back(format_double(p[k]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

void run_simulate(const Config& c, const RunOptions& o, std::ostream& log) {
  check_layout(c);
  const std::uint64_t seed = seed_of(c, o);
  const std::string model = c.str("simulate", "model", "roughvol");
  const std::size_t m = positive(c.integer("simulate", "paths", 1), "[simulate] paths");
  const bool independent = c.boolean("simulate", "independent_asset_driver", false);

  std::vector<std::string> procs;
  std::vector<std::vector<std::vector<double>>> out;  // [process][path][node]
  PathGrid grid(1, 1.0);

  if (model == "roughvol") {
    const RoughVolParams p = roughvol_of(c);
    if (!is_power_of_two(p.n)) throw ValidationError("[roughvol] n must be a power of two");
    const std::uint64_t scheme_no = c.integer("simulate", "scheme", 1);
    if (scheme_no != 1 && scheme_no != 2) throw ValidationError("[simulate] scheme must be 1 or 2");
    procs = c.strings("simulate", "processes", std::vector<std::string>{"Y", "Z"});
    for (const auto& s : procs)
      if (s != "Y" && s != "Z" && s != "S") throw ValidationError("[simulate] roughvol processes are Y, Z, S");
    grid = p.grid();
    const RoughVolSimulator sim(p, scheme_no == 1 ? RoughVolScheme::kScheme1 : RoughVolScheme::kScheme2);
    const auto fabric = make_fabric(seed, p.n, m, p.T, independent);
    out.assign(procs.size(), std::vector<std::vector<double>>(m));
    parallel_for(m, o.threads, [&](std::size_t i) {
      const NoisePath noise = fabric.path(i);
      RoughVolPaths yz = sim.paths(noise.dW);
      for (std::size_t j = 0; j < procs.size(); ++j) {
        if (procs[j] == "Y") out[j][i] = yz.Y.values;
        if (procs[j] == "Z") out[j][i] = yz.Z.values;
        if (procs[j] == "S") {
          std::vector<double> dB = noise.dW;
          if (independent)
            for (std::size_t k = 0; k < dB.size(); ++k) dB[k] = std::sqrt(grid.step()) * noise.aux[k];
          out[j][i] = simulate_asset(p, yz.Y, dB).values;
        }
      }
    });
  } else if (model == "volterra") {
    const double T = horizon_of(c);
    const std::size_t n = positive(c.integer("simulate", "n", 1024), "[simulate] n");
    if (!is_power_of_two(n)) throw ValidationError("[simulate] n must be a power of two");
    procs = c.strings("simulate", "processes", std::vector<std::string>{"xi", "X"});
    for (const auto& s : procs)
      if (s != "xi" && s != "X") throw ValidationError("[simulate] volterra processes are xi, X");
    const auto variant = validated([&] { return parse_scheme_variant(c.str("simulate", "variant", "frozen")); });
    const VolterraSpec spec =
        validated([&] { return VolterraSpec(MemoryProcessSpec(xi0_of(c), kernel_of(c), coefficients_of(c), T), variant); });
    grid = PathGrid(n, T);
    const WeightTable w(spec.kernel(), variant, grid);
    const auto kappa = kappa_table(spec.memory(), grid);
    const bool hybrid = variant == SchemeVariant::kHybridDiffusion;
    const auto fabric = make_fabric(seed, n, m, T, hybrid);
    out.assign(procs.size(), std::vector<std::vector<double>>(m));
    parallel_for(m, o.threads, [&](std::size_t i) {
      const NoisePath noise = fabric.path(i);
      const double xi0 = spec.memory().xi0().from_normal(noise.xi0_normal);
      std::vector<double> xi(grid.size());
      euler_xi(spec.memory(), grid, noise.dW, xi0, kappa, xi);
      std::vector<double> x;
      for (std::size_t j = 0; j < procs.size(); ++j) {
        if (procs[j] == "xi") out[j][i] = xi;
        if (procs[j] == "X") {
          FrozenCoefficients fc;
          freeze_coefficients(spec, grid, xi, fc);
          const auto recent = hybrid ? recent_integrals(w, noise.dW, noise.aux) : std::vector<double>{};
          out[j][i] = euler_x_nodes(w, fc, VolterraNoise{noise.dW, recent}, xi0, 1);
        }
      }
    });
  } else {
    throw ValidationError("[simulate] model must be roughvol or volterra");
  }

  prepare_out(c, o);
  for (std::size_t j = 0; j < procs.size(); ++j) {
    const auto file = o.out / ("paths_" + procs[j] + ".csv");
    write_csv(file, path_table(grid, out[j]));
    log << "wrote " << file.string() << " (" << m << " paths, " << grid.n() << " steps)\n";
  }
}

void run_rates(const Config& c, const RunOptions& o, std::ostream& log) {
  check_layout(c);
  const std::uint64_t seed = seed_of(c, o);
  const double T = horizon_of(c);
  const std::string process = c.str("rates", "process", "xi");
  if (process != "xi" && process != "X") throw ValidationError("[rates] process must be xi or X");
  const auto hs = c.reals("rates", "H", std::vector<double>{0.1});
  if (hs.empty()) throw ValidationError("[rates] H list is empty");
  for (double h : hs)
    if (!(h > 0.0 && h < 0.5)) throw ValidationError("[rates] every H must lie in (0, 1/2)");
  const auto n_list = c.integers("rates", "n_list");
  if (n_list.empty()) throw ValidationError("[rates] n_list is empty");
  std::size_t n_max = 0;
  for (auto n : n_list) n_max = std::max(n_max, n);
  const std::size_t n_ref = c.integer("rates", "n_ref", 16 * n_max);
  const std::size_t paths = positive(c.integer("rates", "paths", 200), "[rates] paths");
  StrongErrorOptions opt;
  opt.p = c.real("rates", "p", 2.0);
  opt.norm = validated([&] { return parse_error_norm(c.str("rates", "norm", "pathwise-sup")); });
  opt.threads = o.threads;
  const auto variant = validated([&] { return parse_scheme_variant(c.str("rates", "variant", "hybrid")); });
  const Coefficients coeffs = coefficients_of(c);
  const InitialCondition ic = xi0_of(c);
  const Kernel probe = kernel_of(c, 0.75);
  if (probe.kind() != KernelKind::kFractional && probe.kind() != KernelKind::kGamma)
    throw ValidationError("[rates] kernel kind must be fractional or gamma");

  struct Job {
    double H;
    std::unique_ptr<CoupledScheme> scheme;
  };
  std::vector<Job> jobs;
  for (double H : hs) {
    const Kernel k = kernel_of(c, H + 0.5);
    MemoryProcessSpec mem = validated([&] { return MemoryProcessSpec(ic, k, coeffs, T); });
    std::unique_ptr<CoupledScheme> s;
    if (process == "xi") s = std::make_unique<XiScheme>(std::move(mem));
    else s = std::make_unique<XScheme>(validated([&] { return VolterraSpec(std::move(mem), variant); }));
    jobs.push_back({H, std::move(s)});
  }
  // Validate the grid layout once before any simulation.
  validated([&] {
    if (!is_power_of_two(n_ref)) throw std::invalid_argument("[rates] n_ref must be a power of two");
    for (auto n : n_list)
      if (n == 0 || n_ref % n != 0 || !is_power_of_two(n_ref / n))
        throw std::invalid_argument("[rates] every n must divide n_ref by a power of two");
    if (n_ref < 8 * n_max) throw std::invalid_argument("[rates] n_ref must be at least 8 * max(n_list)");
    if (!(opt.p >= 1.0)) throw std::invalid_argument("[rates] p must be at least 1");
    return 0;
  });

  prepare_out(c, o);
  CsvTable rates{{"process", "H", "n", "h", "error", "se"}, {}};
  CsvTable slopes{{"process", "H", "slope", "r_squared"}, {}};
  for (auto& job : jobs) {
    const auto fabric = make_fabric(seed, n_ref, paths, T, job.scheme->needs_aux());
    const auto res = validated([&] { return strong_error(*job.scheme, fabric, n_list, n_ref, opt); });
    for (const auto& pt : res.points)
      rates.add_row({process, format_double(job.H), std::to_string(pt.n), format_double(pt.h),
                     format_double(pt.error), format_double(pt.se)});
    const RateReport rep = validated([&] { return fit_rate(res.points); });
    slopes.add_row({process, format_double(job.H), format_double(rep.slope), format_double(rep.r_squared)});
    log << process << " H=" << job.H << " slope=" << rep.slope << " r2=" << rep.r_squared << '\n';
  }
  write_csv(o.out / "rates.csv", rates);
  write_csv(o.out / "slopes.csv", slopes);
}

void run_kernel_check(const Config& c, const RunOptions& o, std::ostream& log) {
  check_layout(c);
  const Kernel k = kernel_of(c);
  const CoKernel ck = co_kernel(k);
  const double t_min = c.real("kernel_check", "t_min", 0.01);
  const double t_max = c.real("kernel_check", "t_max", 5.0);
  const std::size_t points = positive(c.integer("kernel_check", "points", 500), "[kernel_check] points");
  const double l_min = c.real("kernel_check", "laplace_t_min", 1e-3);
  const double l_max = c.real("kernel_check", "laplace_t_max", 1e3);
  const std::size_t l_points = positive(c.integer("kernel_check", "laplace_points", 100), "[kernel_check] laplace_points");
  const std::string method_name = c.str("kernel_check", "method", "closed-form");
  const double conv_tol = c.real("kernel_check", "convolution_tolerance", 1e-6);
  const double lap_tol = c.real("kernel_check", "laplace_tolerance", 1e-10);
  if (!(t_min > 0.0 && t_max >= t_min) || !(l_min > 0.0 && l_max >= l_min))
    throw ValidationError("[kernel_check] time ranges must be positive and ordered");
  ConvolutionMethod method;
  if (method_name == "closed-form") method = ConvolutionMethod::kClosedForm;
  else if (method_name == "quadrature") method = ConvolutionMethod::kQuadrature;
  else throw ValidationError("[kernel_check] method must be closed-form or quadrature");

  std::vector<double> ts(points);
  for (std::size_t i = 0; i < points; ++i)
    ts[i] = points == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(points - 1);
  const double conv_err = verify_pseudo_inverse(k, ck, ts, method);
  double lap_err = 0.0;
  for (std::size_t i = 0; i < l_points; ++i) {
    const double f = l_points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(l_points - 1);
    const double t = l_min * std::pow(l_max / l_min, f);
    lap_err = std::max(lap_err, std::abs(laplace(k, t) * laplace(ck, t) - 1.0 / (t + k.rho())));
  }

  prepare_out(c, o);
  CsvTable t{{"check", "max_error", "tolerance", "status"}, {}};
  const bool conv_ok = conv_err <= conv_tol, lap_ok = lap_err <= lap_tol;
  t.add_row({"convolution", format_double(conv_err), format_double(conv_tol), conv_ok ? "ok" : "breach"});
  t.add_row({"laplace", format_double(lap_err), format_double(lap_tol), lap_ok ? "ok" : "breach"});
  write_csv(o.out / "kernel_check.csv", t);
  log << "kernel " << to_string(k.kind()) << " c=" << k.c() << " alpha=" << k.alpha() << " rho=" << k.rho() << '\n'
      << "  convolution identity max error " << conv_err << (conv_ok ? " ok" : " BREACH") << '\n'
      << "  laplace product max error " << lap_err << (lap_ok ? " ok" : " BREACH") << '\n';
  if (!conv_ok || !lap_ok) throw ToleranceError("kernel check exceeded tolerance");
}

void run_bench(const Config& c, const RunOptions& o, std::ostream& log) {
  check_layout(c);
  const double T = horizon_of(c);
  const auto n_list = c.integers("bench", "n_list", std::vector<std::size_t>{1024, 2048, 4096, 8192});
  if (n_list.empty()) throw ValidationError("[bench] n_list is empty");
  for (auto n : n_list)
    if (n == 0) throw ValidationError("[bench] every n must be positive");
  const std::size_t repeats = positive(c.integer("bench", "repeats", 5), "[bench] repeats");
  const auto variant = validated([&] { return parse_scheme_variant(c.str("bench", "variant", "frozen")); });
  const VolterraSpec spec =
      validated([&] { return VolterraSpec(MemoryProcessSpec(xi0_of(c), kernel_of(c), coefficients_of(c), T), variant); });
  prepare_out(c, o);
  const auto timings = bench_endpoint(spec, n_list, repeats, seed_of(c, o));
  CsvTable t{{"variant", "n", "median_seconds"}, {}};
  for (const auto& tm : timings) {
    t.add_row({tm.variant, std::to_string(tm.n), format_double(tm.median_seconds)});
    log << tm.variant << " n=" << tm.n << " " << tm.median_seconds << " s\n";
  }
  write_csv(o.out / "timings.csv", t);
}

int run_command(std::string_view command, const std::filesystem::path& config_path, const RunOptions& options,
                std::ostream& log, std::ostream& err) {
  try {
    const Config c = Config::load(config_path);
    if (command == "simulate") run_simulate(c, options, log);
    else if (command == "rates") run_rates(c, options, log);
    else if (command == "kernel-check") run_kernel_check(c, options, log);
    else if (command == "bench") run_bench(c, options, log);
    else throw ValidationError("unknown command '" + std::string(command) + "'");
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ToleranceError& e) {
    err << "tolerance breach: " << e.what() << '\n';
    return kTolerance;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace memvol::cli
