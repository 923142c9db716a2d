#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "youngwave/grid.hpp"
#include "youngwave/mollifier.hpp"

namespace youngwave {

inline constexpr double kDefaultMuStar = 4.0;

// Exponential weight w_mu(x) = exp(-mu |x|) or polynomial P(x) = (1+|x|^(d+1))^-1.
class Weight {
 public:
  enum class Kind { Exponential, Polynomial };

  static Weight exponential(double mu, double mu_star = kDefaultMuStar) {
    if (!(mu >= 0.0) || mu > mu_star + 1e-12)
      throw ParamOutOfRange("Weight: mu must lie in [0, mu_star]");
    Weight w;
    w.kind_ = Kind::Exponential;
    w.mu_ = mu;
    return w;
  }

  static Weight polynomial() {
    Weight w;
    w.kind_ = Kind::Polynomial;
    return w;
  }

  Kind kind() const { return kind_; }
  double mu() const { return mu_; }

  double operator()(double radius, int dim) const {
    if (kind_ == Kind::Exponential) return std::exp(-mu_ * radius);
    return 1.0 / (1.0 + std::pow(radius, dim + 1));
  }

 private:
  Kind kind_ = Kind::Exponential;
  double mu_ = 0.0;
};

struct BesovSpec {
  double s;
  double p;
  double q;  // may be +infinity
  Weight weight;

  BesovSpec(double s_, double p_, double q_, Weight w) : s(s_), p(p_), q(q_), weight(w) {
    if (!(s <= 1.0)) throw ParamOutOfRange("BesovSpec: s <= 1 required");
    if (!(p > 1.0) || !std::isfinite(p)) throw ParamOutOfRange("BesovSpec: p in (1,inf) required");
    if (!(q > 1.0)) throw ParamOutOfRange("BesovSpec: q in (1,inf] required");
  }
};

// Weight schedule mu_t = a + b*t for the process space: sup-in-time Besov norm
// plus gamma-Hoelder increment norm, increments weighted at the later time.
struct PathSpaceSpec {
  double gamma;
  double kappa;
  double a;
  double b;
  double horizon;
  double mu_star;

  PathSpaceSpec(double gamma_, double kappa_, double a_, double b_, double horizon_,
                double mu_star_ = kDefaultMuStar)
      : gamma(gamma_), kappa(kappa_), a(a_), b(b_), horizon(horizon_), mu_star(mu_star_) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParamOutOfRange("PathSpaceSpec: gamma in [0,1]");
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw ParamOutOfRange("PathSpaceSpec: kappa in [0,1]");
    if (!(a >= 0.0)) throw ParamOutOfRange("PathSpaceSpec: a >= 0");
    if (!(b >= 0.0)) throw ParamOutOfRange("PathSpaceSpec: b >= 0");
    if (!(horizon > 0.0)) throw ParamOutOfRange("PathSpaceSpec: horizon > 0");
    if (a + b * horizon > mu_star + 1e-12)
      throw ParamOutOfRange("PathSpaceSpec: weight schedule exceeds mu_star at the horizon");
  }

  double mu_at(double t) const { return a + b * t; }
};

namespace detail {

inline double point_radius(const BoxGrid& g, std::size_t flat) {
  if (g.dim() == 1) return std::abs(g.coord(flat));
  const double x = g.coord(flat / g.n());
  const double y = g.coord(flat % g.n());
  return std::sqrt(x * x + y * y);
}

inline std::vector<double> weight_samples(const BoxGrid& g, const Weight& w) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = w(point_radius(g, i), g.dim());
  return out;
}

}  // namespace detail

// phi_j * f via the spectral dilation phi_hat(2^-j xi); j=0 uses phi_0.
inline Field lp_block(const Field& f, int j, const Mollifier& m) {
  if (j < 0 || j > m.j_max())
    throw LevelOutOfRange("lp_block: j=" + std::to_string(j) + " outside [0, " +
                          std::to_string(m.j_max()) + "]");
  if (f.grid() != m.grid()) throw GridMismatch("lp_block: field grid differs from mollifier grid");
  SpectralField F = forward_transform(f);
  const BoxGrid& g = f.grid();
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= m.block_multiplier(j, g.freq_norm(i));
  return inverse_transform(F);
}

inline std::vector<Field> lp_blocks(const Field& f, const Mollifier& m) {
  const SpectralField F = forward_transform(f);
  const BoxGrid& g = f.grid();
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(m.j_max()) + 1);
  for (int j = 0; j <= m.j_max(); ++j) {
    SpectralField B(g);
    for (std::size_t i = 0; i < F.size(); ++i)
      B[i] = F[i] * m.block_multiplier(j, g.freq_norm(i));
    out.push_back(inverse_transform(B));
  }
  return out;
}

// (int |f|^p w dx)^(1/p) by grid quadrature; p = 1 is accepted so the
// indicator integrals with analytic values stay expressible
inline double weighted_lp_norm(const Field& f, double p, const Weight& w) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParamOutOfRange("weighted_lp_norm: p in [1,inf)");
  const BoxGrid& g = f.grid();
  std::vector<double> terms(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    terms[i] = std::pow(std::abs(f[i]), p) * w(detail::point_radius(g, i), g.dim());
  const double hpow = std::pow(g.spacing(), g.dim());
  return std::pow(hpow * pairwise_sum(terms), 1.0 / p);
}

namespace detail {

// weighted L^p norm against precomputed weight samples
inline double lp_norm_with(const Field& f, double p, std::span<const double> w) {
  std::vector<double> terms(f.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * f[i] * w[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::pow(std::abs(f[i]), p) * w[i];
  }
  const double hpow = std::pow(f.grid().spacing(), f.grid().dim());
  return std::pow(hpow * pairwise_sum(terms), 1.0 / p);
}

inline double levels_to_norm(std::span<const double> level_norms, double s, double q) {
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t j = 0; j < level_norms.size(); ++j)
      best = std::max(best, std::pow(2.0, s * static_cast<double>(j)) * level_norms[j]);
    return best;
  }
  std::vector<double> terms(level_norms.size());
  for (std::size_t j = 0; j < level_norms.size(); ++j)
    terms[j] = std::pow(std::pow(2.0, s * static_cast<double>(j)) * level_norms[j], q);
  return std::pow(pairwise_sum(terms), 1.0 / q);
}

}  // namespace detail

// Truncated Besov norm (sum_j 2^{jsq} ||phi_j * f||_{L^p_w}^q)^{1/q}; levels
// run to the mollifier's j_max, q = infinity takes the sup over levels.
inline double besov_norm(const Field& f, const BesovSpec& spec, const Mollifier& m) {
  const auto blocks = lp_blocks(f, m);
  const auto w = detail::weight_samples(f.grid(), spec.weight);
  std::vector<double> level_norms(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j)
    level_norms[j] = detail::lp_norm_with(blocks[j], spec.p, w);
  return detail::levels_to_norm(level_norms, spec.s, spec.q);
}

// Sobolev norm of order s, computed spectrally on the torus.
inline double sobolev_norm(const Field& f, double s) {
  const SpectralField F = forward_transform(f);
  const BoxGrid& g = f.grid();
  std::vector<double> terms(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.freq_norm(i);
    terms[i] = std::pow(1.0 + xi * xi, s) * std::norm(F[i]);
  }
  return std::sqrt(std::pow(g.freq_step(), g.dim()) * pairwise_sum(terms));
}

// Discrete E^{gamma,kappa} norm of a time-indexed family of fields:
//   sup_s ||u_s||_{B^{kappa,mu_s}_{2,inf}}
//   + sup_{s<t} ||u_t - u_s||_{B^{kappa,mu_t}_{2,inf}} / (t-s)^gamma,
// maxima over the path's own time points (ordered pairs).
inline double path_norm(std::span<const double> times, std::span<const Field> values,
                        const PathSpaceSpec& spec, const Mollifier& m, unsigned threads = 0) {
  const std::size_t M = times.size();
  if (M < 2 || values.size() != M)
    throw EmptyPath("path_norm: need >= 2 time points with matching fields");
  const BoxGrid& g = values[0].grid();
  const int jm = m.j_max();

  // blocks[i][j] = phi_j * u_{t_i}
  std::vector<std::vector<Field>> blocks(M);
  parallel_for(
      M,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) blocks[i] = lp_blocks(values[i], m);
      },
      threads);

  std::vector<std::vector<double>> weights(M);
  for (std::size_t i = 0; i < M; ++i)
    weights[i] = detail::weight_samples(g, Weight::exponential(spec.mu_at(times[i]), spec.mu_star));

  double sup_term = 0.0;
  for (std::size_t t = 0; t < M; ++t) {
    std::vector<double> level_norms(static_cast<std::size_t>(jm) + 1);
    for (int j = 0; j <= jm; ++j)
      level_norms[static_cast<std::size_t>(j)] =
          detail::lp_norm_with(blocks[t][static_cast<std::size_t>(j)], 2.0, weights[t]);
    sup_term = std::max(sup_term, detail::levels_to_norm(level_norms, spec.kappa,
                                                         std::numeric_limits<double>::infinity()));
  }

  double holder = 0.0;
  const double hpow = std::pow(g.spacing(), g.dim());
  std::vector<double> pair_max(M, 0.0);
  parallel_for(
      M,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
          double best = 0.0;
          for (std::size_t s = 0; s < t; ++s) {
            const double dt = times[t] - times[s];
            double level_best = 0.0;
            for (int j = 0; j <= jm; ++j) {
              const auto& bt = blocks[t][static_cast<std::size_t>(j)];
              const auto& bs = blocks[s][static_cast<std::size_t>(j)];
              double acc = 0.0;
              const auto& w = weights[t];
              for (std::size_t x = 0; x < bt.size(); ++x) {
                const double d = bt[x] - bs[x];
                acc += d * d * w[x];
              }
              level_best = std::max(level_best, std::pow(2.0, spec.kappa * static_cast<double>(j)) *
                                                    std::sqrt(hpow * acc));
            }
            best = std::max(best, level_best / std::pow(dt, spec.gamma));
          }
          pair_max[t] = best;
        }
      },
      threads);
  for (double v : pair_max) holder = std::max(holder, v);

  return sup_term + holder;
}

struct ProductBoundParams {
  double alpha;
  double beta;
  double p;
  double p1;
  double p2;
  double mu;
  double mu1;
  double mu2;
  double mu_star = kDefaultMuStar;
};

// ||f g||_{B^{-alpha,mu}_{p,inf}} / (||f||_{B^{-alpha,mu1}_{p1,inf}} ||g||_{B^{beta,mu2}_{p2,inf}})
// after validating the parameter constraints; the product is de-aliased.
inline double check_product_bound(const Field& f, const Field& g, const ProductBoundParams& prm,
                                  const Mollifier& m) {
  if (!(prm.alpha > 0.0 && prm.alpha <= 1.0))
    throw ParamConstraintViolated("alpha must lie in (0,1]");
  if (!(prm.beta > 0.0 && prm.beta <= 1.0)) throw ParamConstraintViolated("beta must lie in (0,1]");
  if (!(prm.alpha < prm.beta)) throw ParamConstraintViolated("alpha < beta required");
  if (std::abs(1.0 / prm.p - 1.0 / prm.p1 - 1.0 / prm.p2) > 1e-12)
    throw ParamConstraintViolated("1/p = 1/p1 + 1/p2 required");
  if (std::abs(prm.mu / prm.p - prm.mu1 / prm.p1 - prm.mu2 / prm.p2) > 1e-12)
    throw ParamConstraintViolated("mu/p = mu1/p1 + mu2/p2 required");
  for (double mu : {prm.mu, prm.mu1, prm.mu2})
    if (!(mu >= 0.0 && mu <= prm.mu_star))
      throw ParamConstraintViolated("weights must lie in [0, mu_star]");

  const double inf = std::numeric_limits<double>::infinity();
  const double denom_f =
      besov_norm(f, BesovSpec(-prm.alpha, prm.p1, inf, Weight::exponential(prm.mu1, prm.mu_star)), m);
  const double denom_g =
      besov_norm(g, BesovSpec(prm.beta, prm.p2, inf, Weight::exponential(prm.mu2, prm.mu_star)), m);
  const Field fg = dealiased_product(f, g);
  const double numer =
      besov_norm(fg, BesovSpec(-prm.alpha, prm.p, inf, Weight::exponential(prm.mu, prm.mu_star)), m);
  if (denom_f == 0.0 || denom_g == 0.0) return numer == 0.0 ? 0.0 : inf;
  return numer / (denom_f * denom_g);
}

}  // namespace youngwave
