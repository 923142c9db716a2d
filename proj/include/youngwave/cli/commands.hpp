#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "youngwave/admissibility.hpp"
#include "youngwave/cli/config.hpp"
#include "youngwave/solver.hpp"

namespace youngwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitThresholdFailed = 1;
inline constexpr int kExitConfigInvalid = 2;

struct CommonOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string format = "csv";
};

namespace detail {

inline std::ofstream open_report(const CommonOptions& opt, const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  std::ofstream os(fs::path(opt.out_dir) / name);
  if (!os) throw IoError("cannot open report file " + name + " in " + opt.out_dir);
  return os;
}

// with --format json, each CSV table is mirrored as an array-of-objects file
inline void mirror_tables_as_json(const CommonOptions& opt) {
  namespace fs = std::filesystem;
  for (const auto& entry : fs::directory_iterator(opt.out_dir)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream is(entry.path());
    std::string header;
    if (!std::getline(is, header)) continue;
    std::vector<std::string> cols;
    for (std::size_t pos = 0; pos <= header.size();) {
      const std::size_t comma = header.find(',', pos);
      cols.push_back(header.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    Json rows = Json::array();
    for (std::string line; std::getline(is, line);) {
      Json row;
      std::size_t pos = 0;
      for (const auto& col : cols) {
        const std::size_t comma = line.find(',', pos);
        const std::string cell =
            line.substr(pos, comma == std::string::npos ? comma : comma - pos);
        const Json parsed = Json::parse(cell, nullptr, false);
        row[col] = (parsed.is_discarded() || cell.empty()) ? Json(cell) : parsed;
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      rows.push_back(std::move(row));
    }
    std::ofstream os(fs::path(entry.path()).replace_extension(".json"));
    os << rows.dump(2) << "\n";
  }
}

inline void write_summary(const CommonOptions& opt, const Json& summary) {
  {
    auto os = open_report(opt, "summary.json");
    os << summary.dump(2) << "\n";
  }
  if (opt.format == "json") mirror_tables_as_json(opt);
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline SpectralMeasure measure_from(const Json& cfg, int dim) {
  const std::string kind = get_or<std::string>(cfg, "measure", "radial_riesz");
  if (kind == "radial_riesz")
    return SpectralMeasure::radial_riesz(get_or(cfg, "a", 0.5), dim);
  if (kind == "riesz_product") {
    auto exps = get_or(cfg, "axis_exponents", std::vector<double>(dim, 0.5));
    return SpectralMeasure::riesz_product(std::move(exps));
  }
  if (kind == "smooth_test") return SpectralMeasure::smooth_test(dim);
  throw ConfigInvalid("unknown measure kind '" + kind + "'");
}

inline Field bump_data(const BoxGrid& g, double sigma, double amp) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.dim() == 1 ? g.coord(i) : g.coord(i / g.n());
    const double y = g.dim() == 1 ? 0.0 : g.coord(i % g.n());
    f[i] = amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
  }
  return f;
}

// random band-limited field used by the verification sweeps
inline Field rough_family_member(const BoxGrid& g, std::uint64_t seed, double decay,
                                 double band_fraction) {
  SplitMix64 rng(seed);
  SpectralField F(g);
  const double cutoff = band_fraction * g.nyquist();
  const std::size_t n = g.n();
  auto cidx = [&](std::size_t m) { return m == 0 ? std::size_t{0} : n - m; };
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.freq_norm(i);
    if (xi == 0.0 || xi > cutoff) continue;
    const double amp = std::pow(xi, -decay);
    F[i] = {amp * rng.next_gaussian(), amp * rng.next_gaussian()};
  }
  SpectralField H(g);
  if (g.dim() == 1) {
    for (std::size_t m = 0; m < n; ++m) H[m] = 0.5 * (F[m] + std::conj(F[cidx(m)]));
  } else {
    for (std::size_t m1 = 0; m1 < n; ++m1)
      for (std::size_t m2 = 0; m2 < n; ++m2)
        H[m1 * n + m2] = 0.5 * (F[m1 * n + m2] + std::conj(F[cidx(m1) * n + cidx(m2)]));
  }
  return inverse_transform(H);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// kernel-check: exact d=1 L1 rows, the d=2 Hoelder ratio with quadrature
// refinement, the K-quantity lattice with support probes, and the Strichartz
// slope table. Exit 0 iff every threshold is met.
// ---------------------------------------------------------------------------
inline int cmd_kernel_check(const Json& cfg, const CommonOptions& opt) {
  const std::size_t pairs = get_or<std::size_t>(cfg, "pairs", 100);
  if (pairs == 0) throw ConfigInvalid("kernel-check: 'pairs' must be positive");
  const std::uint64_t seed = opt.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1));
  bool pass = true;
  Json summary;

  // d=1 exactness and d=2 Hoelder stability
  {
    auto os = detail::open_report(opt, "l1_diff.csv");
    os << "dim,s,t,value,holder_ratio\n";
    SplitMix64 rng(seed);
    double worst_exact = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
      double s = rng.next_unit(), t = rng.next_unit();
      if (s > t) std::swap(s, t);
      const double v = kernel_l1_diff(1, s, t);
      worst_exact = std::max(worst_exact, std::abs(v - (t - s)));
      os << "1," << detail::fmt(s) << "," << detail::fmt(t) << "," << detail::fmt(v) << ","
         << detail::fmt(v / (t - s)) << "\n";
    }
    double max_ratio_coarse = 0.0, max_ratio_fine = 0.0;
    for (std::size_t i = 0; i < pairs / 2; ++i) {
      double s = rng.next_unit(), t = rng.next_unit();
      if (s > t) std::swap(s, t);
      if (t - s < 1e-6) continue;
      const double coarse = kernel_l1_diff(2, s, t, 8);
      const double fine = kernel_l1_diff(2, s, t, 16);
      const double hold = std::sqrt(t - s);
      max_ratio_coarse = std::max(max_ratio_coarse, coarse / hold);
      max_ratio_fine = std::max(max_ratio_fine, fine / hold);
      os << "2," << detail::fmt(s) << "," << detail::fmt(t) << "," << detail::fmt(fine) << ","
         << detail::fmt(fine / hold) << "\n";
    }
    const double drift = std::abs(max_ratio_fine - max_ratio_coarse) /
                         std::max(max_ratio_coarse, 1e-300);
    const bool ok_exact = worst_exact <= 1e-12;
    const bool ok_holder = std::isfinite(max_ratio_fine) && drift < 0.05;
    summary["l1_exact_worst"] = worst_exact;
    summary["l1_holder_max_ratio"] = max_ratio_fine;
    summary["l1_holder_refinement_drift"] = drift;
    pass = pass && ok_exact && ok_holder;
  }

  // K-quantity lattice and support probes
  {
    auto os = detail::open_report(opt, "kquantity.csv");
    os << "dim,j,t,value,support_residue\n";
    bool ok = true;
    for (int dim : {1, 2}) {
      double coarse_max = 0.0;
      std::vector<std::tuple<int, double, double, double>> rows;
      for (int j = 0; j <= 8; ++j) {
        for (double t : {0.1, 0.5, 1.0}) {
          coarse_max = std::max(coarse_max, kcal_quantity(dim, t, j, 8));
          const double v = kcal_quantity(dim, t, j, 16);
          const double support = std::abs(kcal_pointwise(dim, t, j, t + 2.0 + 1e-9));
          rows.emplace_back(j, t, v, support);
        }
      }
      for (const auto& [j, t, v, support] : rows) {
        os << dim << "," << j << "," << detail::fmt(t) << "," << detail::fmt(v) << ","
           << detail::fmt(support) << "\n";
        ok = ok && v <= 1.5 * coarse_max && support < 1e-10;
      }
      summary["kquantity_max_d" + std::to_string(dim)] = coarse_max;
    }
    summary["kquantity_ok"] = ok;
    pass = pass && ok;
  }

  // Strichartz slopes over a dyadic |t-s| sweep. The sweep must stay in the
  // asymptotic regime: 1/|t-s| inside the family band, and the band inside
  // the resolvable blocks.
  {
    auto os = detail::open_report(opt, "strichartz.csv");
    os << "dim,kappa,member,slope,threshold\n";
    const std::size_t family = get_or<std::size_t>(cfg, "family", 4);
    const std::size_t n1 = get_or<std::size_t>(cfg, "grid_n_1d", 2048);
    const std::size_t n2 = get_or<std::size_t>(cfg, "grid_n_2d", 256);
    const double alpha = get_or(cfg, "alpha", -0.5);
    const double s0 = get_or(cfg, "sweep_base_time", 0.3);
    bool ok = true;
    for (int dim : {1, 2}) {
      const BoxGrid g(dim, dim == 1 ? n1 : n2, dim == 1 ? 8.0 : 4.0);
      const Mollifier m = make_mollifier(1, g);
      const Weight w = Weight::exponential(1.0);
      const double rho = rho_d(dim);
      const std::vector<double> kappas =
          dim == 1 ? std::vector<double>{0.0, 0.5, 1.0} : std::vector<double>{0.0, 0.25, 0.5};
      const int klo = dim == 1 ? 2 : 1;
      const int khi = dim == 1 ? 6 : 4;
      const double band = dim == 1 ? 0.15 : 0.1;
      constexpr double kInfQ = std::numeric_limits<double>::infinity();
      for (std::size_t member = 0; member < family; ++member) {
        const Field f = detail::rough_family_member(g, seed + 100 * member, 0.0, band);
        std::vector<std::vector<double>> norms(kappas.size());
        std::vector<double> xs;
        for (int k = klo; k <= khi; ++k) {
          const double dt = std::ldexp(1.0, -k);
          const Field diff = apply_G(s0 + dt, f) - apply_G(s0, f);
          xs.push_back(std::log2(dt));
          for (std::size_t ki = 0; ki < kappas.size(); ++ki)
            norms[ki].push_back(
                std::log2(besov_norm(diff, BesovSpec(alpha + kappas[ki], 2.0, kInfQ, w), m)));
        }
        for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
          const double slope = fit_line(xs, norms[ki]).slope;
          const double threshold = rho - kappas[ki] - 0.15;
          ok = ok && slope >= threshold;
          os << dim << "," << detail::fmt(kappas[ki]) << "," << member << ","
             << detail::fmt(slope) << "," << detail::fmt(threshold) << "\n";
        }
      }
    }
    summary["strichartz_ok"] = ok;
    pass = pass && ok;
  }

  summary["pass"] = pass;
  detail::write_summary(opt, summary);
  return pass ? kExitOk : kExitThresholdFailed;
}

// ---------------------------------------------------------------------------
// noise: sampling, covariance Monte-Carlo against the oracle, and the
// truncation level-decay fit.
// ---------------------------------------------------------------------------
inline int cmd_noise(const Json& cfg, const CommonOptions& opt) {
  const int dim = get_or(cfg, "dim", 1);
  const std::size_t grid_n = get_or<std::size_t>(cfg, "grid_n", 512);
  const double half_width = get_or(cfg, "half_width", 8.0);
  const double a0 = get_or(cfg, "a0", 0.5);
  const int level = get_or(cfg, "level", 6);
  const std::uint64_t seed = opt.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1));
  const std::size_t draws = get_or<std::size_t>(cfg, "draws", 2000);
  const BoxGrid grid(dim, grid_n, half_width);
  const SpectralMeasure measure = detail::measure_from(cfg, dim);
  const std::vector<double> times =
      get_or(cfg, "times", std::vector<double>{0.0, 0.25, 0.5, 1.0});
  NoiseConfig ncfg{a0, measure, level, seed, grid, times};
  ncfg.validate();

  bool pass = true;
  Json summary;

  // covariance Monte-Carlo vs oracle at probe tuples
  {
    auto os = detail::open_report(opt, "covariance.csv");
    os << "x,y,s_index,t_index,mc,se,oracle,within_3se\n";
    SplitMix64 probe_rng(seed ^ 0xabcdef);
    struct Probe {
      std::size_t x, y, is, it;
    };
    std::vector<Probe> probes;
    for (int i = 0; i < 10; ++i)
      probes.push_back({probe_rng.next_u64() % grid.size(), probe_rng.next_u64() % grid.size(),
                        1 + probe_rng.next_u64() % (times.size() - 1),
                        1 + probe_rng.next_u64() % (times.size() - 1)});
    std::vector<std::vector<double>> samples(probes.size(), std::vector<double>(draws));
    parallel_for(
        draws,
        [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) {
            NoiseConfig c = ncfg;
            c.seed = seed + 17 + i;
            const NoisePath p = sample_path(c, 1);
            for (std::size_t q = 0; q < probes.size(); ++q)
              samples[q][i] =
                  p.slices[probes[q].it][probes[q].x] * p.slices[probes[q].is][probes[q].y];
          }
        },
        opt.threads);
    bool ok = true;
    for (std::size_t q = 0; q < probes.size(); ++q) {
      const double total = pairwise_sum(samples[q]);
      const double mean = total / static_cast<double>(draws);
      double ss = 0.0;
      for (double v : samples[q]) {
        const double loo = (total - v) / static_cast<double>(draws - 1);
        ss += (loo - mean) * (loo - mean);
      }
      const double se =
          std::sqrt(ss * static_cast<double>(draws - 1) / static_cast<double>(draws));
      const double oracle = covariance_oracle(ncfg, probes[q].x, probes[q].y,
                                              times[probes[q].is], times[probes[q].it]);
      const bool within = std::abs(mean - oracle) <= 3.0 * se;
      ok = ok && within;
      os << probes[q].x << "," << probes[q].y << "," << probes[q].is << "," << probes[q].it
         << "," << detail::fmt(mean) << "," << detail::fmt(se) << "," << detail::fmt(oracle)
         << "," << (within ? 1 : 0) << "\n";
    }
    summary["covariance_ok"] = ok;
    const NoisePath sample = sample_path(ncfg, opt.threads);
    summary["slice0_zero"] = sample.slices[0].max_abs() == 0.0;
    if (get_or(cfg, "save_path", false))
      save_noise_path(sample, (std::filesystem::path(opt.out_dir) / "noise_path").string());
    pass = pass && ok && summary["slice0_zero"].get<bool>();
  }

  // level decay of the Hoelder-Besov norm
  {
    const int n_lo = get_or(cfg, "decay_level_min", 3);
    const int n_hi = get_or(cfg, "decay_level_max", 5);
    if (std::ldexp(1.0, n_hi + 1) > grid.nyquist() + 1e-12)
      throw ConfigInvalid(
          "noise: 2^(decay_level_max+1) must not exceed the grid Nyquist frequency");
    const std::size_t seeds = get_or<std::size_t>(cfg, "decay_seeds", 10);
    const double theta = get_or(cfg, "theta", 0.7);
    const double alpha = get_or(cfg, "alpha", 0.35);
    const double p = get_or(cfg, "p", 16.0);
    const Mollifier m = make_mollifier(1, grid);
    summary["p_threshold_ok"] = p >= noise_p_threshold(a0, theta);

    auto os = detail::open_report(opt, "leveldecay.csv");
    os << "level,median_norm\n";
    std::vector<double> xs, ys;
    for (int n = n_lo; n <= n_hi; ++n) {
      std::vector<double> norms(seeds);
      parallel_for(
          seeds,
          [&](std::size_t lo, std::size_t hi) {
            for (std::size_t s = lo; s < hi; ++s) {
              NoiseConfig c = ncfg;
              c.level = n + 1;
              c.seed = seed + s;
              norms[s] = holder_besov_norm(sample_level_increment(c, 1), theta, alpha, p, m, 1);
            }
          },
          opt.threads);
      const double med = median(norms);
      os << n << "," << detail::fmt(med) << "\n";
      xs.push_back(n);
      ys.push_back(std::log2(med));
    }
    const LinearFit fit = fit_line(xs, ys);
    summary["decay_epsilon_fit"] = -fit.slope;
    summary["decay_r_squared"] = fit.r_squared;
    pass = pass && -fit.slope > 0.0;
  }

  summary["pass"] = pass;
  detail::write_summary(opt, summary);
  return pass ? kExitOk : kExitThresholdFailed;
}

namespace detail {

struct RunSetup {
  BoxGrid grid;
  SolveConfig solve;
  InitialData data;
  Mollifier mollifier;
};

inline RunSetup run_setup(const Json& cfg, const CommonOptions& opt) {
  const int dim = get_or(cfg, "dim", 1);
  const std::size_t grid_n = get_or<std::size_t>(cfg, "grid_n", 1024);
  const double half_width = get_or(cfg, "half_width", 8.0);
  const double a0 = get_or(cfg, "a0", 0.3);
  const double a = get_or(cfg, "a", 0.5);
  const double alpha_d = get_or(cfg, "alpha_d", 0.5 * a);
  const BoxGrid grid(dim, grid_n, half_width);

  const auto verdict = admissible_params(dim, a0, alpha_d);
  if (std::holds_alternative<Infeasible>(verdict))
    throw ConfigInvalid("parameters infeasible: " + std::get<Infeasible>(verdict).violated);

  SolveConfig solve{dim,
                    a0,
                    detail::measure_from(cfg, dim),
                    std::get<AdmissibleParams>(verdict),
                    grid,
                    get_or(cfg, "level", 5),
                    get_or(cfg, "horizon", 0.5)};
  solve.picard_tol = get_or(cfg, "picard_tol", 1e-6);
  solve.picard_max = get_or(cfg, "picard_max", 12);
  solve.seed = opt.seed.value_or(get_or<std::uint64_t>(cfg, "seed", 1));
  solve.validate();

  // wrap-around margin: box must contain horizon + data reach + mollifier reach
  const double data_sigma = get_or(cfg, "data_sigma", 0.5);
  const double data_reach = 6.0 * data_sigma;
  if (half_width < solve.horizon + data_reach + 4.0)
    throw ConfigInvalid(
        "wrap-around margin violated: need half_width >= horizon + data support + 4");

  InitialData data(detail::bump_data(grid, data_sigma, get_or(cfg, "data_amp", 1.0)),
                   detail::bump_data(grid, data_sigma, get_or(cfg, "velocity_amp", 0.0)),
                   solve.params.kappa);
  Mollifier m = make_mollifier(get_or(cfg, "moment_order", 1), grid);
  return RunSetup{grid, std::move(solve), std::move(data), std::move(m)};
}

inline NoisePath run_noise(const Json& cfg, const RunSetup& setup, int time_level,
                           unsigned threads) {
  const DyadicPartition part(setup.solve.horizon, time_level);
  NoiseConfig ncfg{setup.solve.a0,     setup.solve.measure, get_or(cfg, "noise_level", 4),
                   setup.solve.seed,   setup.grid,          part.points()};
  if (get_or(cfg, "zero_noise", false))
    return NoisePath{ncfg, std::vector<Field>(part.count(), Field(setup.grid)), {}};
  return sample_path(ncfg, threads);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// young: the Cauchy-in-n study for the dyadic Riemann sums.
// ---------------------------------------------------------------------------
inline int cmd_young(const Json& cfg, const CommonOptions& opt) {
  const auto setup = detail::run_setup(cfg, opt);
  const int n_min = get_or(cfg, "n_min", 3);
  const int n_max = get_or(cfg, "n_max", 6);
  if (n_min < 0 || n_max <= n_min) throw ConfigInvalid("young: need 0 <= n_min < n_max");

  const NoisePath W = detail::run_noise(cfg, setup, n_max, opt.threads);
  const ProcessPath u =
      initial_wave_path(setup.data, DyadicPartition(setup.solve.horizon, n_max), opt.threads);
  const auto& prm = setup.solve.params;
  const PathSpaceSpec spec = setup.solve.path_spec();
  const YoungConditions cond{prm.gamma, prm.kappa, prm.theta, prm.alpha, prm.p, setup.grid.dim()};

  const CauchyReport report = cauchy_report(u, W, n_min, n_max, spec, setup.mollifier, cond,
                                            get_or(cfg, "q_diag", 8.0), opt.threads);

  auto os = detail::open_report(opt, "cauchy.csv");
  os << "n,d_n,local_rate\n";
  for (std::size_t i = 0; i < report.d.size(); ++i) {
    os << report.levels[i] << "," << detail::fmt(report.d[i]) << ",";
    if (i < report.local_rate.size()) os << detail::fmt(report.local_rate[i]);
    os << "\n";
  }

  const bool pass = report.params_admissible && report.epsilon_fit > 0.0;
  Json summary{{"epsilon_fit", report.epsilon_fit},
               {"C_fit", report.c_fit},
               {"r_squared", report.r_squared},
               {"converged", report.converged},
               {"boundedness_ratio", report.boundedness_ratio},
               {"params_admissible", report.params_admissible},
               {"violated_condition", report.violated_condition},
               {"pass", pass}};
  detail::write_summary(opt, summary);
  return pass ? kExitOk : kExitThresholdFailed;
}

// ---------------------------------------------------------------------------
// solve: Picard iteration plus solution export; with zero noise the run is
// checked against the d'Alembert formula.
// ---------------------------------------------------------------------------
inline int cmd_solve(const Json& cfg, const CommonOptions& opt) {
  namespace fs = std::filesystem;
  const auto setup = detail::run_setup(cfg, opt);
  const NoisePath W = detail::run_noise(cfg, setup, setup.solve.level, opt.threads);

  const Solution sol = picard_solve(setup.data, W, setup.solve, setup.mollifier, opt.threads);

  auto os = detail::open_report(opt, "deltas.csv");
  os << "iteration,delta\n";
  for (std::size_t i = 0; i < sol.iterates_delta.size(); ++i)
    os << (i + 1) << "," << detail::fmt(sol.iterates_delta[i]) << "\n";

  // export: snapshots plus manifest
  const fs::path soldir = fs::path(opt.out_dir) / "solution";
  fs::create_directories(soldir);
  for (std::size_t i = 0; i < sol.path.values.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "u_%04zu.bwf", i);
    save_field(sol.path.values[i], (soldir / name).string());
  }
  Json manifest{{"dim", setup.grid.dim()},
                {"grid_n", setup.grid.n()},
                {"half_width", setup.grid.half_width()},
                {"a0", setup.solve.a0},
                {"level", setup.solve.level},
                {"horizon", setup.solve.horizon},
                {"seed", setup.solve.seed},
                {"picard_tol", setup.solve.picard_tol},
                {"picard_max", setup.solve.picard_max},
                {"params",
                 {{"kappa", setup.solve.params.kappa},
                  {"alpha", setup.solve.params.alpha},
                  {"gamma", setup.solve.params.gamma},
                  {"theta", setup.solve.params.theta},
                  {"p", setup.solve.params.p},
                  {"delta", setup.solve.params.delta}}},
                {"deltas", sol.iterates_delta},
                {"residual", sol.residual},
                {"converged", sol.converged}};
  {
    std::ofstream ms(soldir / "manifest.json");
    ms << manifest.dump(2) << "\n";
  }

  bool pass = sol.converged;
  Json summary{{"converged", sol.converged},
               {"iterations", sol.iterations},
               {"residual", sol.residual}};

  if (get_or(cfg, "zero_noise", false) && setup.grid.dim() == 1) {
    // d'Alembert reference for Gaussian data
    const double sigma = get_or(cfg, "data_sigma", 0.5);
    const double amp = get_or(cfg, "data_amp", 1.0);
    const double vamp = get_or(cfg, "velocity_amp", 0.0);
    const double t = setup.solve.horizon;
    const BoxGrid& g = setup.grid;
    double worst = 0.0;
    const Field& last = sol.path.values.back();
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double x = g.coord(i);
      const double pos = 0.5 * amp *
                         (std::exp(-(x - t) * (x - t) / (2.0 * sigma * sigma)) +
                          std::exp(-(x + t) * (x + t) / (2.0 * sigma * sigma)));
      const double vel = 0.5 * vamp * sigma * std::sqrt(M_PI / 2.0) *
                         (std::erf((x + t) / (sigma * std::sqrt(2.0))) -
                          std::erf((x - t) / (sigma * std::sqrt(2.0))));
      worst = std::max(worst, std::abs(last[i] - (pos + vel)));
    }
    summary["dalembert_max_error"] = worst;
    pass = pass && worst < get_or(cfg, "dalembert_tol", 1e-4);
  }

  summary["pass"] = pass;
  detail::write_summary(opt, summary);
  return pass ? kExitOk : kExitThresholdFailed;
}

// ---------------------------------------------------------------------------
// params: one admissibility verdict, or the (a0, a) feasibility sweep.
// ---------------------------------------------------------------------------
inline int cmd_params(const Json& cfg, const CommonOptions& opt) {
  const int dim = get_or(cfg, "dim", 1);
  Json summary;
  bool pass = true;

  if (cfg.contains("a0") && cfg.contains("a")) {
    const double a0 = cfg.at("a0").get<double>();
    const double a = cfg.at("a").get<double>();
    const double alpha_d = get_or(cfg, "alpha_d", 0.5 * a);
    const auto verdict = admissible_params(dim, a0, alpha_d);
    if (const auto* prm = std::get_if<AdmissibleParams>(&verdict)) {
      summary["feasible"] = true;
      summary["params"] = {{"kappa", prm->kappa}, {"alpha", prm->alpha}, {"gamma", prm->gamma},
                           {"theta", prm->theta}, {"p", prm->p},         {"delta", prm->delta}};
    } else {
      summary["feasible"] = false;
      summary["violated"] = std::get<Infeasible>(verdict).violated;
    }
  } else {
    const std::size_t n_a0 = get_or<std::size_t>(cfg, "lattice_a0", 100);
    const std::size_t n_a = get_or<std::size_t>(cfg, "lattice_a", 100);
    const FeasibilityGrid grid = sweep(dim, n_a0, n_a, opt.threads);
    std::filesystem::create_directories(opt.out_dir);
    write_feasibility_csv(grid, (std::filesystem::path(opt.out_dir) / "region.csv").string());
    write_feasibility_gnuplot(grid, "region.csv",
                              (std::filesystem::path(opt.out_dir) / "region.gp").string());
    const double cell = (dim == 1 ? 2.0 : 4.0) / static_cast<double>(n_a);
    summary["max_boundary_gap"] = grid.max_boundary_gap;
    summary["cell_size"] = cell;
    pass = grid.max_boundary_gap <= cell + 1e-12;
  }

  summary["pass"] = pass;
  detail::write_summary(opt, summary);
  return pass ? kExitOk : kExitThresholdFailed;
}

}  // namespace youngwave::cli
