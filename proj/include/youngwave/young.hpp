#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "youngwave/besov.hpp"
#include "youngwave/noise.hpp"
#include "youngwave/wave_kernel.hpp"

namespace youngwave {

// Regular dyadic partition of [0, T]: points m T / 2^n. Points of level n
// coincide bitwise with the even points of level n+1 (scaling by powers of
// two is exact), which the noise/time-grid coupling relies on.
struct DyadicPartition {
  double horizon;
  int level;

  DyadicPartition(double horizon_, int level_) : horizon(horizon_), level(level_) {
    if (!(horizon > 0.0)) throw ParamOutOfRange("DyadicPartition: horizon > 0");
    if (level < 0 || level > 30) throw ParamOutOfRange("DyadicPartition: level in [0,30]");
  }

  std::size_t count() const { return (std::size_t{1} << level) + 1; }

  double point(std::size_t m) const {
    return std::ldexp(static_cast<double>(m) * horizon, -level);
  }

  std::vector<double> points() const {
    std::vector<double> out(count());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = point(m);
    return out;
  }
};

// A candidate process: one field per partition point.
struct ProcessPath {
  DyadicPartition partition;
  std::vector<Field> values;

  ProcessPath(DyadicPartition part, std::vector<Field> vals)
      : partition(part), values(std::move(vals)) {
    if (values.size() != partition.count())
      throw PartitionMismatch("ProcessPath: value count differs from partition point count");
    for (std::size_t i = 1; i < values.size(); ++i) values[i].require_same_grid(values[0]);
  }
};

namespace detail {

// dyadic level of a time grid over [0, T], or nullopt if it is not one
inline std::optional<int> dyadic_level_of(std::span<const double> times, double horizon) {
  if (times.size() < 2) return std::nullopt;
  for (int level = 0; level <= 30; ++level) {
    const std::size_t count = (std::size_t{1} << level) + 1;
    if (times.size() != count) continue;
    const DyadicPartition part(horizon, level);
    for (std::size_t m = 0; m < count; ++m)
      if (times[m] != part.point(m)) return std::nullopt;
    return level;
  }
  return std::nullopt;
}

struct NoiseIndexing {
  int noise_level;  // dyadic level of the noise time grid
  std::size_t stride(int sum_level) const {
    return std::size_t{1} << (noise_level - sum_level);
  }
};

inline NoiseIndexing check_noise_grid(const NoisePath& W, double horizon, int sum_level) {
  const auto lvl = dyadic_level_of(W.config.times, horizon);
  if (!lvl)
    throw PartitionMismatch("noise time grid is not a dyadic partition of the horizon");
  if (*lvl < sum_level)
    throw PartitionMismatch("noise time grid is coarser than the requested sum level");
  return NoiseIndexing{*lvl};
}

// product spectra P_k = (u_{t_k} * dW_k)^, k = 0 .. 2^level - 1, de-aliased
inline std::vector<SpectralField> product_spectra(const ProcessPath& u, const NoisePath& W,
                                                  int level, unsigned threads = 0) {
  const DyadicPartition part(u.partition.horizon, level);
  if (u.partition.level < level)
    throw PartitionMismatch("process path is coarser than the requested sum level");
  const auto widx = check_noise_grid(W, u.partition.horizon, level);
  const std::size_t ustride = std::size_t{1} << (u.partition.level - level);
  const std::size_t wstride = widx.stride(level);
  if (!W.slices.empty()) u.values[0].require_same_grid(W.slices[0]);

  const std::size_t K = part.count() - 1;
  std::vector<SpectralField> prods(K);
  parallel_for(
      K,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
          Field dW = W.slices[(k + 1) * wstride];
          dW -= W.slices[k * wstride];
          prods[k] = dealiased_product_spectrum(u.values[k * ustride], dW);
        }
      },
      threads);
  return prods;
}

// Evaluate J_t = sum_{t_k < t} G_{t - t_k}(P_k) at the given (ascending)
// times. The shift theorem splits sin((t - t_k)|xi|) into prefix sums over k,
// so the whole path costs O(K + #evals) spectral passes; accumulation order
// over k is fixed, so results do not depend on the thread count.
inline std::vector<Field> evaluate_riemann(const BoxGrid& g, std::span<const double> part_times,
                                           const std::vector<SpectralField>& prods,
                                           std::span<const double> eval_times,
                                           unsigned threads = 0) {
  const std::size_t K = prods.size();
  const std::size_t M = eval_times.size();
  for (std::size_t i = 1; i < M; ++i)
    if (!(eval_times[i] > eval_times[i - 1]))
      throw ParamOutOfRange("evaluate_riemann: evaluation times must be ascending");
  for (double t : eval_times)
    if (t - 0.0 > 1.0 + 1e-12)
      throw ParamOutOfRange("evaluate_riemann: kernel times must stay in [0,1]");

  std::vector<SpectralField> spectra(M, SpectralField(g));

  parallel_for(
      g.size(),
      [&](std::size_t xlo, std::size_t xhi) {
        std::vector<std::complex<double>> acc_cos(xhi - xlo, {0.0, 0.0});
        std::vector<std::complex<double>> acc_sin(xhi - xlo, {0.0, 0.0});
        std::vector<std::complex<double>> acc_t(xhi - xlo, {0.0, 0.0});  // sum t_k P_k at xi=0
        std::size_t k = 0;
        for (std::size_t e = 0; e < M; ++e) {
          const double t = eval_times[e];
          while (k < K && part_times[k] < t) {
            const double tk = part_times[k];
            for (std::size_t x = xlo; x < xhi; ++x) {
              const double xi = g.freq_norm(x);
              const auto p = prods[k][x];
              if (xi == 0.0) {
                acc_cos[x - xlo] += p;
                acc_t[x - xlo] += tk * p;
              } else {
                acc_cos[x - xlo] += std::cos(tk * xi) * p;
                acc_sin[x - xlo] += std::sin(tk * xi) * p;
              }
            }
            ++k;
          }
          for (std::size_t x = xlo; x < xhi; ++x) {
            const double xi = g.freq_norm(x);
            if (xi == 0.0) {
              spectra[e][x] = t * acc_cos[x - xlo] - acc_t[x - xlo];
            } else {
              spectra[e][x] =
                  (std::sin(t * xi) * acc_cos[x - xlo] - std::cos(t * xi) * acc_sin[x - xlo]) / xi;
            }
          }
        }
      },
      threads);

  std::vector<Field> out(M, Field(g));
  parallel_for(
      M,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t e = lo; e < hi; ++e) out[e] = inverse_transform(spectra[e]);
      },
      threads);
  return out;
}

}  // namespace detail

// One Riemann sum J^{(n)}_t = sum_{k: t_k < t} G_{t - t_k}(u_{t_k} dW_k),
// terms reduced by a fixed pairwise tree.
inline Field riemann_sum(const ProcessPath& u, const NoisePath& W, int level, double t) {
  const DyadicPartition part(u.partition.horizon, level);
  if (t > part.horizon + 1e-12) throw ParamOutOfRange("riemann_sum: t beyond the horizon");
  const BoxGrid& g = u.values[0].grid();
  if (t <= 0.0) return Field(g);

  const auto prods = detail::product_spectra(u, W, level);
  std::vector<Field> terms;
  for (std::size_t k = 0; k + 1 < part.count(); ++k) {
    if (!(part.point(k) < t)) break;
    terms.push_back(apply_G(t - part.point(k), inverse_transform(prods[k])));
  }
  if (terms.empty()) return Field(g);
  // pairwise tree reduction
  while (terms.size() > 1) {
    std::vector<Field> next;
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms = std::move(next);
  }
  return terms[0];
}

// J^{(level)} evaluated at every point of the eval_level partition.
inline ProcessPath riemann_path(const ProcessPath& u, const NoisePath& W, int level,
                                int eval_level, unsigned threads = 0) {
  const DyadicPartition part(u.partition.horizon, level);
  const DyadicPartition eval(u.partition.horizon, eval_level);
  const auto prods = detail::product_spectra(u, W, level, threads);
  const auto part_times = part.points();
  const auto eval_times = eval.points();
  std::vector<Field> fields(eval.count(), Field(u.values[0].grid()));
  // J_0 = 0; evaluate the rest through the prefix machinery
  const auto tail = detail::evaluate_riemann(
      u.values[0].grid(), part_times, prods,
      std::span<const double>(eval_times).subspan(1), threads);
  for (std::size_t i = 0; i < tail.size(); ++i) fields[i + 1] = tail[i];
  return ProcessPath(eval, std::move(fields));
}

struct CauchyReport {
  std::vector<int> levels;         // n with a measured difference d_n
  std::vector<double> d;           // d_n = ||J^{(n+1)} - J^{(n)}||_E
  std::vector<double> local_rate;  // log2(d_n / d_{n+1})
  double epsilon_fit = 0.0;        // d_n ~ C 2^{-eps n}
  double c_fit = 0.0;
  double r_squared = 0.0;
  bool converged = false;
  int finest_level = 0;
  bool params_admissible = true;
  std::string violated_condition;
  double boundedness_ratio = 0.0;
};

// parameter conditions of the Riemann-sum convergence statement
struct YoungConditions {
  double gamma;
  double kappa;
  double theta;
  double alpha;
  double p;
  int dim;
};

inline std::string young_condition_violation(const YoungConditions& c) {
  const double rho = rho_d(c.dim);
  for (double v : {c.gamma, c.theta, c.kappa, c.alpha})
    if (!(v >= 0.0 && v <= 1.0)) return "coefficients must lie in [0,1]";
  if (!(c.kappa + c.alpha + c.gamma + (1.0 - rho) < c.theta))
    return "kappa + alpha + gamma + (1 - rho_d) < theta";
  if (!(c.gamma + c.theta > 1.0)) return "gamma + theta > 1";
  if (!(c.kappa > c.alpha + c.dim / c.p)) return "kappa > alpha + d/p";
  if (!(c.gamma < 1.0 - (c.dim + 1) / c.p)) return "gamma < 1 - (d+1)/p";
  return "";
}

struct YoungResult {
  ProcessPath path;
  CauchyReport report;
};

namespace detail {

inline void finish_report(CauchyReport& report) {
  for (std::size_t i = 0; i + 1 < report.d.size(); ++i)
    report.local_rate.push_back(std::log2(report.d[i] / report.d[i + 1]));
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < report.d.size(); ++i) {
    if (report.d[i] <= 0.0) continue;
    xs.push_back(report.levels[i]);
    ys.push_back(std::log2(report.d[i]));
  }
  if (xs.size() >= 2) {
    const LinearFit fit = fit_line(xs, ys);
    report.epsilon_fit = -fit.slope;
    report.c_fit = std::pow(2.0, fit.intercept);
    report.r_squared = fit.r_squared;
  }
}

// level loop shared by young_integral and cauchy_report; divergence raises
// only when requested so the diagnostic table survives a failing sequence
inline YoungResult young_study(const ProcessPath& u, const NoisePath& W, int n_min, int n_max,
                               const PathSpaceSpec& spec, const Mollifier& m, double tol,
                               const std::optional<YoungConditions>& conditions,
                               bool throw_on_divergence, unsigned threads) {
  if (n_min < 0 || n_max < n_min) throw ParamOutOfRange("young_integral: bad level range");
  if (u.partition.level < n_max)
    throw PartitionMismatch("young_integral: process path must resolve the finest level");

  CauchyReport report;
  if (conditions) {
    report.violated_condition = young_condition_violation(*conditions);
    report.params_admissible = report.violated_condition.empty();
  }

  ProcessPath current = riemann_path(u, W, n_min, std::min(n_min + 1, n_max), threads);
  int increases = 0;
  double prev_d = -1.0;
  for (int n = n_min; n < n_max; ++n) {
    // current holds J^{(n)} on level-(n+1) points; compute J^{(n+1)} on the
    // grid needed for the next comparison
    ProcessPath next = riemann_path(u, W, n + 1, std::min(n + 2, n_max), threads);

    const DyadicPartition cmp(u.partition.horizon, n + 1);
    const std::size_t cur_stride = std::size_t{1} << (current.partition.level - (n + 1));
    const std::size_t next_stride = std::size_t{1} << (next.partition.level - (n + 1));
    std::vector<Field> diff;
    diff.reserve(cmp.count());
    for (std::size_t i = 0; i < cmp.count(); ++i)
      diff.push_back(next.values[i * next_stride] - current.values[i * cur_stride]);
    const double dn = path_norm(cmp.points(), diff, spec, m, threads);

    report.levels.push_back(n);
    report.d.push_back(dn);

    if (prev_d >= 0.0 && dn > prev_d) {
      if (++increases >= 3 && throw_on_divergence)
        throw NotConverging("young_integral: differences grew for 3 consecutive levels");
    } else {
      increases = 0;
    }
    prev_d = dn;
    current = std::move(next);

    if (tol > 0.0 && dn < tol) {
      report.converged = true;
      break;
    }
  }

  // restrict the carried evaluation to the partition level it represents
  const int level = report.levels.empty() ? n_min : report.levels.back() + 1;
  report.finest_level = level;
  const DyadicPartition fine(u.partition.horizon, level);
  const std::size_t stride = std::size_t{1} << (current.partition.level - level);
  std::vector<Field> values;
  values.reserve(fine.count());
  for (std::size_t i = 0; i < fine.count(); ++i) values.push_back(current.values[i * stride]);

  finish_report(report);
  return YoungResult{ProcessPath(fine, std::move(values)), std::move(report)};
}

}  // namespace detail

// Dyadic Riemann sums J^{(n)} for n in [n_min, n_max], stopping at the first
// level whose refinement difference falls below tol in the E norm. Raises
// NotConverging if the differences grow three levels in a row.
inline YoungResult young_integral(const ProcessPath& u, const NoisePath& W, int n_min, int n_max,
                                  const PathSpaceSpec& spec, const Mollifier& m, double tol,
                                  const std::optional<YoungConditions>& conditions = std::nullopt,
                                  unsigned threads = 0) {
  return detail::young_study(u, W, n_min, n_max, spec, m, tol, conditions, true, threads);
}

// Diagnostic table for the Cauchy study, including the boundedness ratio
//   ||J||_E / ( ||W||_{C^theta B^{-alpha,P}_{p,inf}} (int_0^T ||u||_E(r)^q dr)^{1/q} ).
inline CauchyReport cauchy_report(const ProcessPath& u, const NoisePath& W, int n_min, int n_max,
                                  const PathSpaceSpec& spec, const Mollifier& m,
                                  const YoungConditions& conditions, double q_diag = 8.0,
                                  unsigned threads = 0) {
  YoungResult result =
      detail::young_study(u, W, n_min, n_max, spec, m, 0.0, conditions, false, threads);
  CauchyReport report = std::move(result.report);

  // Hoelder-Besov size of the noise over the coarsest study partition
  const DyadicPartition coarse(u.partition.horizon, n_min);
  const auto widx = detail::check_noise_grid(W, u.partition.horizon, n_min);
  NoisePath wsub = W;
  wsub.config.times = coarse.points();
  wsub.slices.clear();
  for (std::size_t i = 0; i < coarse.count(); ++i)
    wsub.slices.push_back(W.slices[i * widx.stride(n_min)]);
  const double noise_norm =
      holder_besov_norm(wsub, conditions.theta, conditions.alpha, conditions.p, m, threads);

  // (int_0^T ||u||_{E(r)}^q dr)^{1/q} by the trapezoid rule over prefixes
  std::vector<double> prefix_norms(coarse.count(), 0.0);
  const std::size_t ustride = std::size_t{1} << (u.partition.level - n_min);
  for (std::size_t i = 1; i < coarse.count(); ++i) {
    std::vector<double> times;
    std::vector<Field> vals;
    for (std::size_t k = 0; k <= i; ++k) {
      times.push_back(coarse.point(k));
      vals.push_back(u.values[k * ustride]);
    }
    prefix_norms[i] = path_norm(times, vals, spec, m, threads);
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < coarse.count(); ++i) {
    const double dt = coarse.point(i) - coarse.point(i - 1);
    integral += 0.5 * dt *
                (std::pow(prefix_norms[i - 1], q_diag) + std::pow(prefix_norms[i], q_diag));
  }
  const double u_size = std::pow(integral, 1.0 / q_diag);

  const double j_norm =
      path_norm(result.path.partition.points(), result.path.values, spec, m, threads);
  report.boundedness_ratio = noise_norm * u_size > 0.0 ? j_norm / (noise_norm * u_size) : 0.0;
  return report;
}

}  // namespace youngwave
