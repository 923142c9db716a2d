#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "youngwave/besov.hpp"
#include "youngwave/grid.hpp"

namespace youngwave {

// smoothing exponent of the wave propagator: 1 in d=1, 1/2 in d=2
inline double rho_d(int dim) {
  if (dim == 1) return 1.0;
  if (dim == 2) return 0.5;
  throw ParamOutOfRange("rho_d: dim must be 1 or 2");
}

namespace detail {

inline void check_propagator_time(double t, const BoxGrid& g) {
  if (!(t >= 0.0 && t <= 1.0))
    throw ParamOutOfRange("wave propagator: t must lie in [0,1], got " + std::to_string(t));
  if (t >= g.half_width())
    throw WrapAroundRisk("wave propagator: kernel support B_t does not fit the box");
}

}  // namespace detail

// G_t via the Fourier multiplier sin(t|xi|)/|xi|, with the xi=0 entry set to
// the analytic limit t.
inline Field apply_G(double t, const Field& f) {
  detail::check_propagator_time(t, f.grid());
  if (t == 0.0) return Field(f.grid());  // sin(0) = 0
  SpectralField F = forward_transform(f);
  const BoxGrid& g = f.grid();
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double xi = g.freq_norm(i);
    F[i] *= xi == 0.0 ? t : std::sin(t * xi) / xi;
  }
  return inverse_transform(F);
}

// (d/dt G)_t via the multiplier cos(t|xi|).
inline Field apply_dtG(double t, const Field& f) {
  detail::check_propagator_time(t, f.grid());
  if (t == 0.0) return f;  // cos(0) = 1, exactly the identity
  SpectralField F = forward_transform(f);
  const BoxGrid& g = f.grid();
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= std::cos(t * g.freq_norm(i));
  return inverse_transform(F);
}

namespace detail {

// angular measure of {theta in (-pi,pi] : cos(theta) >= q}
inline double arc_measure(double q) {
  if (q <= -1.0) return 2.0 * M_PI;
  if (q >= 1.0) return 0.0;
  return 2.0 * std::acos(q);
}

// ||G_t - G_s||_{L^1} for d=2 by composite quadrature of the two radial
// integrals (annulus near the light cone, interior difference), each written
// with the singularity-resolving angular substitution r = t sin(phi).
inline double kernel_l1_diff_2d(double s, double t, int panels) {
  if (t == 0.0) return 0.0;
  const double phi_s = std::asin(std::min(1.0, s / t));
  const double annulus =
      gl_composite([&](double phi) { return t * std::sin(phi); }, phi_s, 0.5 * M_PI, panels);
  double interior = 0.0;
  if (s > 0.0) {
    const double self =
        gl_composite([&](double phi) { return s * std::sin(phi); }, 0.0, 0.5 * M_PI, panels);
    const double cross =
        gl_composite([&](double phi) { return t * std::sin(phi); }, 0.0, phi_s, panels);
    interior = self - cross;
  }
  return annulus + interior;
}

}  // namespace detail

// ||G_t - G_s||_{L^1}. d=1 is the exact value t-s (the difference kernel is
// half the indicator of an annulus of width t-s on each side); d=2 is
// quadrature with `panels` controlling the refinement level.
inline double kernel_l1_diff(int dim, double s, double t, int panels = 16) {
  if (!(0.0 <= s && s <= t && t <= 1.0))
    throw BadTimeOrder("kernel_l1_diff: need 0 <= s <= t <= 1");
  if (dim == 1) return t - s;
  if (dim == 2) return detail::kernel_l1_diff_2d(s, t, panels);
  throw ParamOutOfRange("kernel_l1_diff: dim must be 1 or 2");
}

namespace detail {

// Phi_t(c) = integral over R^2 of |G_t(y - c e1) - G_t(y)| dy, reduced to two
// radial integrals over the light disk. The 1/(2 pi) kernel normalization is
// kept explicit; the r-integrals use the substitution v = sqrt(t^2 - r^2)
// that removes the inverse square-root singularity at r = t.
inline double shifted_l1_profile_2d(double t, double c, int panels) {
  if (t == 0.0 || c == 0.0) return 0.0;

  auto q_shift = [&](double r) { return (t * t - r * r - c * c) / (2.0 * c * r); };

  // I2: mass of the shifted kernel outside the unshifted light disk
  const double i2 = gl_composite(
      [&](double v) {
        const double r = std::sqrt(std::max(0.0, t * t - v * v));
        return arc_measure(q_shift(r));
      },
      0.0, t, panels);

  // I3: interior region where the shifted and unshifted kernels disagree
  const double i3 = gl_composite(
      [&](double v) {
        const double r = std::sqrt(std::max(0.0, t * t - v * v));
        const double a1 = arc_measure(c / (2.0 * r));
        const double theta_a = 0.5 * arc_measure(-c / (2.0 * r));
        const double theta_b = 0.5 * arc_measure(q_shift(r));
        const double a2 = 2.0 * std::max(0.0, theta_a - theta_b);
        return a1 - a2;
      },
      0.0, t, panels);

  return (i2 + i3) / M_PI;
}

inline double kcal_l1_1d(double t, int j) {
  const double tj = std::ldexp(t, j + 1);  // 2^{j+1} t
  if (tj >= 2.0) return 4.0;
  return std::ldexp(t * (4.0 - tj), j + 1);
}

}  // namespace detail

// L^1 norm of K^{(d)}_{t,j}(y) = 2^{j rho_d} int_{B_2} |G_t(y - 2^{-j} z) - G_t(y)| dz.
// d=1 uses the exact indicator-overlap value; d=2 integrates the radial
// profile of the shifted-kernel L^1 distance against the B_2 shell measure.
inline double kcal_quantity(int dim, double t, int j, int panels = 16) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParamOutOfRange("kcal_quantity: t in [0,1]");
  if (j < 0) throw ParamOutOfRange("kcal_quantity: j >= 0");
  if (t == 0.0) return 0.0;
  if (dim == 1) return detail::kcal_l1_1d(t, j);
  if (dim != 2) throw ParamOutOfRange("kcal_quantity: dim must be 1 or 2");
  const double delta = std::ldexp(1.0, -j);
  const double outer = detail::gl_composite(
      [&](double zeta) {
        return zeta * detail::shifted_l1_profile_2d(t, delta * zeta, panels);
      },
      0.0, 2.0, panels);
  return std::sqrt(std::ldexp(1.0, j)) * 2.0 * M_PI * outer;
}

namespace detail {

// area of the intersection of disks |w| < R and |w - y| < rho, |y| = r0
inline double lens_area(double R, double rho, double r0) {
  if (r0 >= R + rho) return 0.0;
  if (r0 <= std::abs(R - rho)) {
    const double rmin = std::min(R, rho);
    return M_PI * rmin * rmin;
  }
  const double d2 = r0 * r0;
  const double alpha = std::acos(std::clamp((d2 + R * R - rho * rho) / (2.0 * r0 * R), -1.0, 1.0));
  const double beta = std::acos(std::clamp((d2 + rho * rho - R * R) / (2.0 * r0 * rho), -1.0, 1.0));
  return R * R * (alpha - 0.5 * std::sin(2.0 * alpha)) +
         rho * rho * (beta - 0.5 * std::sin(2.0 * beta));
}

}  // namespace detail

// Pointwise value K^{(d)}_{t,j}(y) for |y| = r0 (the quantity is radial).
// Vanishes identically for r0 >= t + 2^{-j+1}, which is what the support
// confinement checks probe.
inline double kcal_pointwise(int dim, double t, int j, double r0, int panels = 16) {
  if (!(t >= 0.0 && t <= 1.0)) throw ParamOutOfRange("kcal_pointwise: t in [0,1]");
  if (j < 0) throw ParamOutOfRange("kcal_pointwise: j >= 0");
  if (t == 0.0) return 0.0;
  const double delta = std::ldexp(1.0, -j);
  if (r0 >= t + 2.0 * delta) return 0.0;

  if (dim == 1) {
    // measure in z in (-2,2) of {|y - delta z| < t}
    const double lo = std::max(-2.0, (r0 - t) / delta);
    const double hi = std::min(2.0, (r0 + t) / delta);
    const double overlap = std::max(0.0, hi - lo);
    const double value = r0 < t ? 4.0 - overlap : overlap;
    return std::ldexp(0.5 * value, j);
  }
  if (dim != 2) throw ParamOutOfRange("kcal_pointwise: dim must be 1 or 2");

  const double rho = 2.0 * delta;  // radius of the shifted-kernel footprint in w
  const double psi0 = r0 < t ? 1.0 / std::sqrt(t * t - r0 * r0) : 0.0;

  auto ang = [&](double r) {
    if (r0 == 0.0) return r < rho ? 2.0 * M_PI : 0.0;
    return detail::arc_measure((r * r + r0 * r0 - rho * rho) / (2.0 * r * r0));
  };

  const double rmid = std::min(r0, t);
  // singular part: int r ang(r) psi(r) dr over [0, rmid] and [rmid, t]
  auto sing = [&](double vlo, double vhi) {
    return detail::gl_composite(
        [&](double v) { return ang(std::sqrt(std::max(0.0, t * t - v * v))); }, vlo, vhi, panels);
  };
  const double vmid = std::sqrt(std::max(0.0, t * t - rmid * rmid));
  const double T1 = sing(vmid, t);    // r in [0, rmid]
  const double T2 = sing(0.0, vmid);  // r in [rmid, t]
  // smooth parts: int r ang(r) dr
  auto smooth = [&](double rlo, double rhi) {
    if (rhi <= rlo) return 0.0;
    return detail::gl_composite([&](double r) { return r * ang(r); }, rlo, rhi, panels);
  };
  const double T3 = smooth(0.0, rmid);
  const double T4 = smooth(rmid, t);

  double inner;
  if (r0 < t) {
    inner = (psi0 * T3 - T1) + (T2 - psi0 * T4);
  } else {
    inner = T1 + T2;
  }
  const double outside = psi0 * (M_PI * rho * rho - detail::lens_area(t, rho, r0));
  return std::sqrt(std::ldexp(1.0, j)) / (delta * delta) * (inner + outside) / (2.0 * M_PI);
}

// ||(G_t - G_s) f||_{B^{alpha+kappa,mu}_{p,q}} / (|t-s|^{rho_d - kappa} ||f||_{B^{alpha,mu}_{p,q}}).
// spec supplies (p, q, weight); alpha is taken from the argument.
inline double strichartz_ratio(const Field& f, double s, double t, double alpha, double kappa,
                               const BesovSpec& spec, const Mollifier& m) {
  const int dim = f.grid().dim();
  const double rho = rho_d(dim);
  if (!(alpha <= 0.0)) throw ParamOutOfRange("strichartz_ratio: alpha <= 0 required");
  if (!(kappa >= 0.0 && kappa <= rho))
    throw ParamOutOfRange("strichartz_ratio: kappa in [0, rho_d] required");
  if (!(0.0 <= s && s < t && t <= 1.0))
    throw ParamOutOfRange("strichartz_ratio: need 0 <= s < t <= 1");

  const Field diff = apply_G(t, f) - apply_G(s, f);
  const double numer = besov_norm(diff, BesovSpec(alpha + kappa, spec.p, spec.q, spec.weight), m);
  const double denom = std::pow(t - s, rho - kappa) *
                       besov_norm(f, BesovSpec(alpha, spec.p, spec.q, spec.weight), m);
  if (denom == 0.0) return numer == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return numer / denom;
}

// ||G_t f||_{B^{alpha+rho_d,mu}_{p,q}} / ||f||_{B^{alpha,mu}_{p,q}}
inline double smoothing_ratio(const Field& f, double t, double alpha, const BesovSpec& spec,
                              const Mollifier& m) {
  const double rho = rho_d(f.grid().dim());
  if (!(alpha <= 0.0)) throw ParamOutOfRange("smoothing_ratio: alpha <= 0 required");
  if (!(t >= 0.0 && t <= 1.0)) throw ParamOutOfRange("smoothing_ratio: t in [0,1]");
  if (t == 0.0) return 0.0;
  const Field gf = apply_G(t, f);
  const double numer = besov_norm(gf, BesovSpec(alpha + rho, spec.p, spec.q, spec.weight), m);
  const double denom = besov_norm(f, BesovSpec(alpha, spec.p, spec.q, spec.weight), m);
  if (denom == 0.0) return numer == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return numer / denom;
}

}  // namespace youngwave
