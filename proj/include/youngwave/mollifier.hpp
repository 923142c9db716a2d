#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "youngwave/grid.hpp"

namespace youngwave {

namespace detail {

// nodes/weights for n-point Gauss-Legendre on [0,1], cached per order
inline const std::vector<std::pair<double, double>>& gl_nodes(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Newton iteration on the Legendre polynomial P_n
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p1 = 1.0, p2 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
      }
      const double dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double dp = n * (x * p1 - p2) / (x * x - 1.0);
    // map from [-1,1] to [0,1]
    out[static_cast<std::size_t>(i)] = {0.5 * (x + 1.0), 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return cache.emplace(n, std::move(out)).first->second;
}

// integral over [a,b] with one n-point panel
template <class F>
double gl_panel(F&& f, double a, double b, int order = 32) {
  double s = 0.0;
  for (const auto& [x, w] : gl_nodes(order)) s += w * f(a + (b - a) * x);
  return (b - a) * s;
}

// composite Gauss-Legendre with `panels` equal 32-point panels
template <class F>
double gl_composite(F&& f, double a, double b, int panels) {
  std::vector<double> parts(static_cast<std::size_t>(panels));
  const double len = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    parts[static_cast<std::size_t>(p)] = gl_panel(f, a + p * len, a + (p + 1) * len);
  return pairwise_sum(parts);
}

}  // namespace detail

namespace detail {

// Radial profile of phi_0: the C_c^infty bump exp(-1/(1-s^2)) on [0,1),
// multiplied for moment order L >= 2 by an even polynomial chosen so the
// radial moments 1..floor(L/2) vanish, then normalized to unit integral.
struct RadialProfile {
  int dim = 1;
  int moment_order = 1;
  std::vector<double> poly;  // c_1..c_m multiplying s^2, s^4, ...
  double norm = 1.0;

  static double bump(double s) {
    if (s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
  }

  double operator()(double s) const {
    if (s >= 1.0) return 0.0;
    double corr = 1.0;
    double s2k = 1.0;
    for (double c : poly) {
      s2k *= s * s;
      corr += c * s2k;
    }
    return bump(s) * corr / norm;
  }
};

inline RadialProfile make_profile(int dim, int moment_order) {
  if (moment_order < 1) throw ParamOutOfRange("make_mollifier: L >= 1 required");
  RadialProfile prof;
  prof.dim = dim;
  prof.moment_order = moment_order;

  const int m = moment_order / 2;  // number of even moments to kill
  if (m > 8)
    throw MomentSolveFailed("moment system too large (L > 17): increase grid resolution instead");

  auto radial_moment = [&](const RadialProfile& p, int k) {
    return gl_composite([&](double s) { return std::pow(s, k) * p(s); }, 0.0, 1.0, 8);
  };

  if (m > 0) {
    // A c = -b with A_ij = int s^(2i+2j+d-1) bump, b_i = int s^(2i+d-1) bump
    auto bump_moment = [&](int k) {
      return gl_composite([&](double s) { return std::pow(s, k) * RadialProfile::bump(s); }, 0.0,
                          1.0, 8);
    };
    std::vector<std::vector<double>> A(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(m + 1)));
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j)
        A[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
            bump_moment(2 * i + 2 * j + dim - 1);
      A[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m)] =
          -bump_moment(2 * i + dim - 1);
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int r = col + 1; r < m; ++r)
        if (std::abs(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
            std::abs(A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
          piv = r;
      std::swap(A[static_cast<std::size_t>(piv)], A[static_cast<std::size_t>(col)]);
      const double d = A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      if (std::abs(d) < 1e-14)
        throw MomentSolveFailed("singular moment system at L=" + std::to_string(moment_order));
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double factor = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
        for (int c = col; c <= m; ++c)
          A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
              factor * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      }
    }
    prof.poly.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      prof.poly[static_cast<std::size_t>(i)] =
          A[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] /
          A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  }

  // normalize so that the full d-dimensional integral of phi_0 equals 1
  const double omega = dim == 1 ? 2.0 : 2.0 * M_PI;
  const double total = omega * radial_moment(prof, dim - 1);
  const double mass_abs =
      omega * gl_composite([&](double s) { return std::pow(s, dim - 1) * std::abs(prof(s)); }, 0.0,
                           1.0, 8);
  if (std::abs(total) < 1e-8 * mass_abs)
    throw MomentSolveFailed("moment correction cancelled the mass of phi_0 at L=" +
                            std::to_string(moment_order));
  prof.norm = total;

  // certify: killed radial moments must vanish against the profile's own mass
  for (int i = 1; i <= m; ++i) {
    const double mom = radial_moment(prof, 2 * i + dim - 1);
    if (std::abs(mom) > 1e-10 * (1.0 + mass_abs))
      throw MomentSolveFailed("residual moment " + std::to_string(2 * i) + " = " +
                              std::to_string(mom));
  }
  return prof;
}

// Uniform table of the radial Fourier transform of phi_0. For d=1 this is a
// cosine transform of the profile; for d=2 the profile is first Abel-projected
// onto an axis, which reduces the Hankel transform to the same cosine
// transform. Both are evaluated with one zero-padded FFT.
struct RadialFourierTable {
  double drho = 0.0;
  std::vector<double> values;  // values[j] = phi0_hat(j * drho)

  double operator()(double rho) const {
    rho = std::abs(rho);
    const double u = rho / drho;
    if (u >= static_cast<double>(values.size() - 2)) return 0.0;  // deep in the decaying tail
    const auto j = static_cast<std::size_t>(u);
    const double t = u - static_cast<double>(j);
    // Catmull-Rom; even symmetry supplies the j=0 left neighbor
    const double ym1 = j == 0 ? values[1] : values[j - 1];
    const double y0 = values[j];
    const double y1 = values[j + 1];
    const double y2 = values[j + 2];
    const double a = -0.5 * ym1 + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
    const double b = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    const double c = 0.5 * (y1 - ym1);
    return ((a * t + b) * t + c) * t + y0;
  }
};

inline RadialFourierTable build_fourier_table(const RadialProfile& prof) {
  const std::size_t K = 1024;           // samples across [0,1]
  const double hs = 1.0 / static_cast<double>(K);
  const std::size_t M = std::size_t{1} << 21;  // padded transform length

  // axis profile q: the radial profile itself (d=1) or its Abel projection (d=2)
  std::vector<double> q(K, 0.0);
  if (prof.dim == 1) {
    for (std::size_t i = 0; i < K; ++i) q[i] = prof(static_cast<double>(i) * hs);
  } else {
    for (std::size_t i = 0; i < K; ++i) {
      const double u = static_cast<double>(i) * hs;
      const double vmax = std::sqrt(std::max(0.0, 1.0 - u * u));
      q[i] = vmax <= 0.0 ? 0.0
                         : 2.0 * gl_composite(
                                     [&](double v) { return prof(std::sqrt(u * u + v * v)); }, 0.0,
                                     vmax, 4);
    }
  }

  std::vector<std::complex<double>> buf(M, {0.0, 0.0});
  buf[0] = q[0];
  for (std::size_t i = 1; i < K; ++i) {
    buf[i] = q[i];
    buf[M - i] = q[i];
  }
  execute_dft(1, M, FFTW_FORWARD, buf.data(), buf.data());

  RadialFourierTable table;
  table.drho = 2.0 * M_PI / (static_cast<double>(M) * hs);
  table.values.resize(M / 2 + 1);
  for (std::size_t j = 0; j <= M / 2; ++j) table.values[j] = hs * buf[j].real();
  return table;
}

struct ProfileData {
  RadialProfile profile;
  RadialFourierTable table;
};

inline std::shared_ptr<const ProfileData> profile_cache(int dim, int moment_order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ProfileData>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({dim, moment_order});
  if (it != cache.end()) return it->second;
  auto data = std::make_shared<ProfileData>();
  data->profile = make_profile(dim, moment_order);
  data->table = build_fourier_table(data->profile);
  cache.emplace(std::make_pair(dim, moment_order), data);
  return data;
}

}  // namespace detail

// The pair (phi_0, phi) seeding all Littlewood-Paley blocks: phi_0 is a
// radial bump supported in B_1 with unit integral, phi(x) = phi_0(x) -
// 2^{-d} phi_0(x/2) has vanishing moments up to moment_order. Dyadic blocks
// are applied as exact spectral dilations of phi_hat, never by resampling.
class Mollifier {
 public:
  Mollifier(int moment_order, const BoxGrid& grid)
      : grid_(grid),
        moment_order_(moment_order),
        data_(detail::profile_cache(grid.dim(), moment_order)),
        phi0_(grid),
        phi_(grid) {
    if (grid.spacing() > 0.125 + 1e-12)
      throw ParamOutOfRange(
          "make_mollifier: grid must resolve the unit ball with >= 16 points per axis");
    if (grid.half_width() < 2.0)
      throw ParamOutOfRange("make_mollifier: box must contain B_2 (half_width >= 2)");

    const int jm = static_cast<int>(std::floor(std::log2(grid.nyquist()))) - 2;
    j_max_ = std::max(0, jm);

    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = radius(grid, i);
      phi0_[i] = data_->profile(r);
      const double phi0_half = data_->profile(0.5 * r);
      phi_[i] = phi0_[i] - std::pow(2.0, -grid.dim()) * phi0_half;
    }
  }

  int moment_order() const { return moment_order_; }
  int j_max() const { return j_max_; }
  const BoxGrid& grid() const { return grid_; }
  const Field& phi0() const { return phi0_; }
  const Field& phi() const { return phi_; }

  // phi0_hat at radial frequency rho (phi0 is radial, so its transform is too)
  double phi0_hat(double rho) const { return data_->table(rho); }

  // phi_hat(rho) = phi0_hat(rho) - phi0_hat(2 rho)
  double phi_hat(double rho) const { return data_->table(rho) - data_->table(2.0 * rho); }

  // multiplier of the level-j block: phi0_hat at j=0, dilated phi_hat for j>=1
  double block_multiplier(int j, double rho) const {
    if (j == 0) return phi0_hat(rho);
    return phi_hat(std::ldexp(rho, -j));
  }

 private:
  static double radius(const BoxGrid& g, std::size_t flat) {
    if (g.dim() == 1) return std::abs(g.coord(flat));
    const double x = g.coord(flat / g.n());
    const double y = g.coord(flat % g.n());
    return std::sqrt(x * x + y * y);
  }

  BoxGrid grid_;
  int moment_order_;
  int j_max_ = 0;
  std::shared_ptr<const detail::ProfileData> data_;
  Field phi0_;
  Field phi_;
};

inline Mollifier make_mollifier(int moment_order, const BoxGrid& grid) {
  return Mollifier(moment_order, grid);
}

}  // namespace youngwave
