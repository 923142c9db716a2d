#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "youngwave/besov.hpp"
#include "youngwave/grid.hpp"
#include "youngwave/util.hpp"

namespace youngwave {

// Catalog of spectral measures: product Riesz densities prod |beta_i|^-(1-a_i),
// the radial Riesz density |beta|^-(d-a), and a unit Gaussian used to validate
// the cell-mass machinery against closed-form integrals.
class SpectralMeasure {
 public:
  enum class Kind { RieszProduct, RadialRiesz, SmoothTest };

  static SpectralMeasure riesz_product(std::vector<double> axis_exponents) {
    for (double a : axis_exponents)
      if (!(a > 0.0 && a < 2.0))
        throw ParamOutOfRange("SpectralMeasure: product exponents must lie in (0,2)");
    if (axis_exponents.empty() || axis_exponents.size() > 2)
      throw ParamOutOfRange("SpectralMeasure: need one exponent per axis, d in {1,2}");
    SpectralMeasure m;
    m.kind_ = Kind::RieszProduct;
    m.axis_ = std::move(axis_exponents);
    return m;
  }

  static SpectralMeasure radial_riesz(double a, int dim) {
    if (dim != 1 && dim != 2) throw ParamOutOfRange("SpectralMeasure: dim must be 1 or 2");
    if (!(a > 0.0 && a < 2.0 * dim))
      throw ParamOutOfRange("SpectralMeasure: radial exponent must lie in (0, 2d)");
    SpectralMeasure m;
    m.kind_ = Kind::RadialRiesz;
    m.radial_ = a;
    m.dim_ = dim;
    return m;
  }

  static SpectralMeasure smooth_test(int dim) {
    SpectralMeasure m;
    m.kind_ = Kind::SmoothTest;
    m.dim_ = dim;
    return m;
  }

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::RieszProduct ? static_cast<int>(axis_.size()) : dim_; }
  const std::vector<double>& axis_exponents() const { return axis_; }
  double radial_exponent() const { return radial_; }

  // scaling exponent a of gamma(cx) = c^-a gamma(x), where defined
  double scaling_exponent() const {
    if (kind_ == Kind::RadialRiesz) return radial_;
    if (kind_ == Kind::RieszProduct) {
      double sum = 0.0;
      for (double a : axis_) sum += a;
      return sum;
    }
    throw ParamOutOfRange("SpectralMeasure: smooth test measure has no scaling exponent");
  }

 private:
  Kind kind_ = Kind::SmoothTest;
  std::vector<double> axis_;
  double radial_ = 1.0;
  int dim_ = 1;
};

namespace detail {

// int_l^r |b|^(a-1) db, the 1-d power-law cell integral
inline double power_cell_1d(double l, double r, double a) {
  auto anti = [a](double x) { return std::copysign(std::pow(std::abs(x), a), x) / a; };
  return anti(r) - anti(l);
}

inline double gauss_cell_1d(double l, double r) {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return cdf(r) - cdf(l);
}

// int over [-s,s]^2 of |b|^(a-2) db = (8 s^a / a) int_0^{pi/4} sec(t)^a dt
inline double radial_origin_cell_2d(double s, double a) {
  const double angular =
      gl_composite([a](double t) { return std::pow(std::cos(t), -a); }, 0.0, 0.25 * M_PI, 2);
  return 8.0 * std::pow(s, a) / a * angular;
}

// tensor Gauss-Legendre integral of |b|^(a-2) over a rectangle away from 0
inline double radial_cell_2d(double lx, double rx, double ly, double ry, double a, int points) {
  const auto& nodes = gl_nodes(points);
  double sum = 0.0;
  for (const auto& [xi, wi] : nodes) {
    const double bx = lx + (rx - lx) * xi;
    for (const auto& [xj, wj] : nodes) {
      const double by = ly + (ry - ly) * xj;
      sum += wi * wj * std::pow(bx * bx + by * by, 0.5 * (a - 2.0));
    }
  }
  return sum * (rx - lx) * (ry - ly);
}

}  // namespace detail

// mass of each frequency-lattice cell under the measure, truncated to the
// open ball |beta| < 2^level. Cells touching the density singularity at the
// origin are integrated in closed form, never by a midpoint rule.
inline std::vector<double> mode_weights(const SpectralMeasure& measure, const BoxGrid& grid,
                                        int level) {
  if (measure.dim() != grid.dim())
    throw ParamOutOfRange("mode_weights: measure dimension differs from grid dimension");
  if (level < 0 || std::ldexp(1.0, level) > grid.nyquist() + 1e-12)
    throw ParamOutOfRange("mode_weights: 2^level must not exceed the grid Nyquist frequency");
  if (measure.kind() == SpectralMeasure::Kind::RadialRiesz &&
      !(measure.radial_exponent() > 0.0))
    throw NonIntegrableAtOrigin("mode_weights: radial density not integrable at the origin");

  const double hx = grid.freq_step();
  const double cut = std::ldexp(1.0, level);
  std::vector<double> masses(grid.size(), 0.0);

  auto cell_1d = [&](long k, double a) {
    const double c = static_cast<double>(k) * hx;
    return detail::power_cell_1d(c - 0.5 * hx, c + 0.5 * hx, a);
  };

  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    if (grid.freq_norm(flat) >= cut) continue;
    if (grid.dim() == 1) {
      const long k = grid.signed_index(flat);
      switch (measure.kind()) {
        case SpectralMeasure::Kind::RieszProduct:
          masses[flat] = cell_1d(k, measure.axis_exponents()[0]);
          break;
        case SpectralMeasure::Kind::RadialRiesz:
          masses[flat] = cell_1d(k, measure.radial_exponent());
          break;
        case SpectralMeasure::Kind::SmoothTest: {
          const double c = static_cast<double>(k) * hx;
          masses[flat] = detail::gauss_cell_1d(c - 0.5 * hx, c + 0.5 * hx);
          break;
        }
      }
    } else {
      const long k1 = grid.signed_index(flat / grid.n());
      const long k2 = grid.signed_index(flat % grid.n());
      const double c1 = static_cast<double>(k1) * hx, c2 = static_cast<double>(k2) * hx;
      const double l1 = c1 - 0.5 * hx, r1 = c1 + 0.5 * hx;
      const double l2 = c2 - 0.5 * hx, r2 = c2 + 0.5 * hx;
      switch (measure.kind()) {
        case SpectralMeasure::Kind::RieszProduct:
          masses[flat] = detail::power_cell_1d(l1, r1, measure.axis_exponents()[0]) *
                         detail::power_cell_1d(l2, r2, measure.axis_exponents()[1]);
          break;
        case SpectralMeasure::Kind::RadialRiesz: {
          const double a = measure.radial_exponent();
          if (k1 == 0 && k2 == 0) {
            masses[flat] = detail::radial_origin_cell_2d(0.5 * hx, a);
          } else {
            const int pts = (std::abs(k1) <= 4 && std::abs(k2) <= 4) ? 16 : 4;
            masses[flat] = detail::radial_cell_2d(l1, r1, l2, r2, a, pts);
          }
          break;
        }
        case SpectralMeasure::Kind::SmoothTest:
          masses[flat] = detail::gauss_cell_1d(l1, r1) * detail::gauss_cell_1d(l2, r2);
          break;
      }
    }
  }
  return masses;
}

// fractional covariance R_{a0}(t,s) = (|t|^{2-a0} + |s|^{2-a0} - |t-s|^{2-a0}) / 2
inline double fractional_time_cov(double a0, double t, double s) {
  const double h = 2.0 - a0;
  return 0.5 *
         (std::pow(std::abs(t), h) + std::pow(std::abs(s), h) - std::pow(std::abs(t - s), h));
}

struct NoiseConfig {
  double a0;
  SpectralMeasure measure;
  int level;
  std::uint64_t seed;
  BoxGrid grid;
  std::vector<double> times;

  void validate() const {
    if (!(a0 > 0.0 && a0 < 2.0)) throw ParamOutOfRange("NoiseConfig: a0 must lie in (0,2)");
    if (level < 0 || std::ldexp(1.0, level) > grid.nyquist() + 1e-12)
      throw ParamOutOfRange("NoiseConfig: 2^level must not exceed the grid Nyquist frequency");
    if (times.empty() || times.front() != 0.0)
      throw ParamOutOfRange("NoiseConfig: times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw ParamOutOfRange("NoiseConfig: times must be strictly increasing");
    if (measure.dim() != grid.dim())
      throw ParamOutOfRange("NoiseConfig: measure dimension differs from grid dimension");
  }
};

struct NoisePath {
  NoiseConfig config;
  std::vector<Field> slices;              // one per time, slices[0] = 0
  std::vector<double> temporal_cov_chol;  // cached lower factor over times[1:]
};

namespace detail {

// lower Cholesky factor of [R_{a0}(t_i, t_j)] over times[1:]
inline std::vector<double> fractional_chol(double a0, std::span<const double> times) {
  const std::size_t m = times.size() - 1;
  std::vector<double> L(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = fractional_time_cov(a0, times[i + 1], times[j + 1]);
      for (std::size_t k = 0; k < j; ++k) sum -= L[i * m + k] * L[j * m + k];
      if (i == j) {
        if (!(sum > 1e-14 * fractional_time_cov(a0, times[i + 1], times[i + 1])))
          throw CholeskyFailure("fractional covariance not positive definite (a0=" +
                                std::to_string(a0) + ")");
        L[i * m + i] = std::sqrt(sum);
      } else {
        L[i * m + j] = sum / L[j * m + j];
      }
    }
  }
  return L;
}

// one lattice mode's contribution: complex time-vector with covariance
// mass * R, drawn from the per-mode stream so levels couple pathwise
inline void draw_mode(std::vector<std::vector<std::complex<double>>>& spectra,
                      const std::vector<double>& chol, std::size_t m, std::uint64_t seed,
                      std::size_t flat, std::size_t conj_flat, double mass, bool self_conjugate) {
  SplitMix64 rng(mix_seed(seed, 0x9d2c5680u ^ (flat * 0x100000001b3ULL)));
  const double scale = std::sqrt(mass);
  std::vector<std::complex<double>> z(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double re = rng.next_gaussian();
    if (self_conjugate) {
      z[i] = re;
    } else {
      const double im = rng.next_gaussian();
      z[i] = std::complex<double>(re, im) * M_SQRT1_2;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::complex<double> v{0.0, 0.0};
    for (std::size_t k = 0; k <= i; ++k) v += chol[i * m + k] * z[k];
    v *= scale;
    spectra[i + 1][flat] = v;
    if (!self_conjugate) spectra[i + 1][conj_flat] = std::conj(v);
  }
}

inline bool mode_is_canonical(const BoxGrid& g, std::size_t flat) {
  if (g.dim() == 1) return g.signed_index(flat) >= 0;
  const long k1 = g.signed_index(flat / g.n());
  const long k2 = g.signed_index(flat % g.n());
  return k1 > 0 || (k1 == 0 && k2 >= 0);
}

inline std::size_t conjugate_flat(const BoxGrid& g, std::size_t flat) {
  const std::size_t n = g.n();
  if (g.dim() == 1) return flat == 0 ? 0 : n - flat;
  const std::size_t m1 = flat / n, m2 = flat % n;
  return (m1 == 0 ? 0 : n - m1) * n + (m2 == 0 ? 0 : n - m2);
}

// synthesize the annuli lo..hi of the dyadic frequency decomposition,
// accumulating level fields in ascending order so truncation levels telescope
// bitwise: annulus 0 is the ball B_1, annulus l covers 2^{l-1} <= |beta| < 2^l
inline std::vector<Field> synthesize_levels(const NoiseConfig& cfg,
                                            const std::vector<double>& chol, int lo, int hi,
                                            unsigned threads) {
  const BoxGrid& g = cfg.grid;
  const std::size_t M = cfg.times.size();
  const std::size_t m = M - 1;
  const auto masses = mode_weights(cfg.measure, g, cfg.level);

  std::vector<Field> out(M, Field(g));
  std::vector<std::size_t> canonical;
  for (std::size_t flat = 0; flat < g.size(); ++flat)
    if (masses[flat] > 0.0 && mode_is_canonical(g, flat)) canonical.push_back(flat);

  std::vector<std::vector<std::complex<double>>> spectra(
      M, std::vector<std::complex<double>>(g.size()));

  for (int level = lo; level <= hi; ++level) {
    const double band_lo = level == 0 ? 0.0 : std::ldexp(1.0, level - 1);
    const double band_hi = std::ldexp(1.0, level);
    for (auto& s : spectra) std::fill(s.begin(), s.end(), std::complex<double>{0.0, 0.0});

    parallel_for(
        canonical.size(),
        [&](std::size_t a, std::size_t b) {
          for (std::size_t idx = a; idx < b; ++idx) {
            const std::size_t flat = canonical[idx];
            const double r = g.freq_norm(flat);
            if (r < band_lo || r >= band_hi) continue;
            draw_mode(spectra, chol, m, cfg.seed, flat, conjugate_flat(g, flat), masses[flat],
                      flat == 0);
          }
        },
        threads);

    // Sum the mode amplitudes directly: W(x) = sum_k Z_k exp(i beta_k . x).
    // This is the unnormalized backward transform, not inverse_transform's
    // density convention. Slice 0 stays exactly zero.
    std::vector<double> residues(M, 0.0);
    parallel_for(
        M - 1,
        [&](std::size_t a, std::size_t b) {
          std::vector<std::complex<double>> buf(g.size());
          for (std::size_t i = a + 1; i < b + 1; ++i) {
            for (std::size_t x = 0; x < g.size(); ++x)
              buf[x] = bin_phase(g, x) * spectra[i][x];
            execute_dft(g.dim(), g.n(), FFTW_BACKWARD, buf.data(), buf.data());
            double residue = 0.0;
            for (std::size_t x = 0; x < g.size(); ++x) {
              out[i][x] += buf[x].real();
              residue = std::max(residue, std::abs(buf[x].imag()));
            }
            residues[i] = residue;
          }
        },
        threads);
    for (double r : residues)
      if (r > 1e-12)
        throw NonHermitianInput("noise synthesis: imaginary residue " + std::to_string(r));
  }
  return out;
}

}  // namespace detail

// Draw one realization of the truncated noise on the config's time grid.
// Each spatial mode's time process is sampled exactly from its fractional
// covariance via the Cholesky factor; randomness is keyed on (seed, mode), so
// truncation levels agree pathwise on shared modes.
inline NoisePath sample_path(const NoiseConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  NoisePath path{cfg, {}, detail::fractional_chol(cfg.a0, cfg.times)};
  path.slices = detail::synthesize_levels(cfg, path.temporal_cov_chol, 0, cfg.level, threads);
  return path;
}

// The pathwise increment between truncation levels cfg.level-1 and cfg.level:
// only the outermost annulus of modes contributes.
inline NoisePath sample_level_increment(const NoiseConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  if (cfg.level < 1)
    throw ParamOutOfRange("sample_level_increment: level must be >= 1");
  NoisePath path{cfg, {}, detail::fractional_chol(cfg.a0, cfg.times)};
  path.slices =
      detail::synthesize_levels(cfg, path.temporal_cov_chol, cfg.level, cfg.level, threads);
  return path;
}

// E[W_t(x) W_s(y)] for the truncated noise: R_{a0}(t,s) * sum_k mass_k cos(beta_k . (x-y))
inline double covariance_oracle(const NoiseConfig& cfg, std::size_t flat_x, std::size_t flat_y,
                                double s, double t) {
  cfg.validate();
  const BoxGrid& g = cfg.grid;
  const auto masses = mode_weights(cfg.measure, g, cfg.level);
  double dx, dy = 0.0;
  if (g.dim() == 1) {
    dx = g.coord(flat_x) - g.coord(flat_y);
  } else {
    dx = g.coord(flat_x / g.n()) - g.coord(flat_y / g.n());
    dy = g.coord(flat_x % g.n()) - g.coord(flat_y % g.n());
  }
  std::vector<double> terms;
  terms.reserve(g.size());
  const double hx = g.freq_step();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    if (masses[flat] == 0.0) continue;
    double phase;
    if (g.dim() == 1) {
      phase = static_cast<double>(g.signed_index(flat)) * hx * dx;
    } else {
      phase = hx * (static_cast<double>(g.signed_index(flat / g.n())) * dx +
                    static_cast<double>(g.signed_index(flat % g.n())) * dy);
    }
    terms.push_back(masses[flat] * std::cos(phase));
  }
  return fractional_time_cov(cfg.a0, t, s) * pairwise_sum(terms);
}

// smallest p for which the Cauchy-sequence argument applies at (a0, theta)
inline double noise_p_threshold(double a0, double theta) {
  return 1.0 / (1.0 - 0.5 * a0 - theta);
}

// Discrete C^theta([0,T]; B^{-alpha,P}_{p,inf}) norm of a noise path over its
// own time grid, polynomial weight throughout.
inline double holder_besov_norm(const NoisePath& path, double theta, double alpha, double p,
                                const Mollifier& m, unsigned threads = 0) {
  const double a0 = path.config.a0;
  if (!(theta > 0.0 && theta < 1.0 - 0.5 * a0))
    throw ParamOutOfRange("holder_besov_norm: theta must lie in (0, 1 - a0/2)");
  if (!(alpha > 0.0)) throw ParamOutOfRange("holder_besov_norm: alpha > 0 required");
  const std::size_t M = path.slices.size();
  if (M < 2) throw EmptyPath("holder_besov_norm: need >= 2 time slices");
  const BoxGrid& g = path.config.grid;
  const int jm = m.j_max();

  std::vector<std::vector<Field>> blocks(M);
  parallel_for(
      M,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) blocks[i] = lp_blocks(path.slices[i], m);
      },
      threads);
  const auto w = detail::weight_samples(g, Weight::polynomial());

  auto level_norm = [&](const Field& block) { return detail::lp_norm_with(block, p, w); };
  auto besov_sup = [&](auto&& level_of_j) {
    double best = 0.0;
    for (int j = 0; j <= jm; ++j)
      best = std::max(best, std::pow(2.0, -alpha * static_cast<double>(j)) * level_of_j(j));
    return best;
  };

  double sup_term = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    sup_term = std::max(sup_term, besov_sup([&](int j) {
                          return level_norm(blocks[i][static_cast<std::size_t>(j)]);
                        }));

  std::vector<double> row_max(M, 0.0);
  parallel_for(
      M,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
          double best = 0.0;
          for (std::size_t s = 0; s < t; ++s) {
            const double dt = path.config.times[t] - path.config.times[s];
            const double norm = besov_sup([&](int j) {
              const auto& bt = blocks[t][static_cast<std::size_t>(j)];
              const auto& bs = blocks[s][static_cast<std::size_t>(j)];
              Field diff = bt;
              diff -= bs;
              return level_norm(diff);
            });
            best = std::max(best, norm / std::pow(dt, theta));
          }
          row_max[t] = best;
        }
      },
      threads);
  double holder = 0.0;
  for (double v : row_max) holder = std::max(holder, v);
  return sup_term + holder;
}

// --- NoisePath snapshot: one BWF1 file per slice plus a JSON sidecar --------

inline void save_noise_path(const NoisePath& path, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json sidecar;
  sidecar["a0"] = path.config.a0;
  switch (path.config.measure.kind()) {
    case SpectralMeasure::Kind::RieszProduct:
      sidecar["measure"] = {{"kind", "riesz_product"},
                            {"exponents", path.config.measure.axis_exponents()}};
      break;
    case SpectralMeasure::Kind::RadialRiesz:
      sidecar["measure"] = {{"kind", "radial_riesz"},
                            {"exponent", path.config.measure.radial_exponent()}};
      break;
    case SpectralMeasure::Kind::SmoothTest:
      sidecar["measure"] = {{"kind", "smooth_test"}};
      break;
  }
  sidecar["level"] = path.config.level;
  sidecar["seed"] = path.config.seed;
  sidecar["times"] = path.config.times;
  sidecar["grid"] = {{"dim", path.config.grid.dim()},
                     {"n", path.config.grid.n()},
                     {"half_width", path.config.grid.half_width()}};
  std::ofstream js(fs::path(dir) / "config.json");
  js << sidecar.dump(2) << "\n";
  for (std::size_t i = 0; i < path.slices.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "slice_%04zu.bwf", i);
    save_field(path.slices[i], (fs::path(dir) / name).string());
  }
}

inline NoisePath load_noise_path(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream js(fs::path(dir) / "config.json");
  if (!js) throw IoError("load_noise_path: missing config.json in " + dir);
  nlohmann::json sidecar = nlohmann::json::parse(js);

  const auto& gj = sidecar.at("grid");
  BoxGrid grid(gj.at("dim").get<int>(), gj.at("n").get<std::size_t>(),
               gj.at("half_width").get<double>());

  const auto& mj = sidecar.at("measure");
  const std::string kind = mj.at("kind").get<std::string>();
  SpectralMeasure measure =
      kind == "riesz_product"
          ? SpectralMeasure::riesz_product(mj.at("exponents").get<std::vector<double>>())
          : (kind == "radial_riesz"
                 ? SpectralMeasure::radial_riesz(mj.at("exponent").get<double>(), grid.dim())
                 : SpectralMeasure::smooth_test(grid.dim()));

  NoiseConfig cfg{sidecar.at("a0").get<double>(),
                  measure,
                  sidecar.at("level").get<int>(),
                  sidecar.at("seed").get<std::uint64_t>(),
                  grid,
                  sidecar.at("times").get<std::vector<double>>()};
  cfg.validate();

  NoisePath path{cfg, {}, detail::fractional_chol(cfg.a0, cfg.times)};
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "slice_%04zu.bwf", i);
    path.slices.push_back(load_field((fs::path(dir) / name).string()));
    if (path.slices.back().grid() != grid)
      throw IoError("load_noise_path: slice grid differs from sidecar grid");
  }
  return path;
}

}  // namespace youngwave
