#pragma once

#include <fftw3.h>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "youngwave/errors.hpp"
#include "youngwave/util.hpp"

namespace youngwave {

// Uniform periodic grid over the box [-L, L)^dim with 2^k points per axis.
// Spatial points are x_i = -L + i*h, h = 2L/n; the frequency lattice is
// xi_k = (pi/L)*k for k in {-n/2, ..., n/2 - 1} per axis.
class BoxGrid {
 public:
  BoxGrid(int dim, std::size_t n, double half_width) : dim_(dim), n_(n), half_width_(half_width) {
    if (dim != 1 && dim != 2) throw ParamOutOfRange("BoxGrid: dim must be 1 or 2");
    if (n < 8 || (n & (n - 1)) != 0)
      throw ParamOutOfRange("BoxGrid: n must be a power of two, n >= 8");
    if (!(half_width > 0.0)) throw ParamOutOfRange("BoxGrid: half_width must be positive");
    spacing_ = 2.0 * half_width / static_cast<double>(n);
  }

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return dim_ == 1 ? n_ : n_ * n_; }

  // coordinate along one axis
  double coord(std::size_t i) const { return -half_width_ + static_cast<double>(i) * spacing_; }

  // signed frequency index for DFT bin m
  long signed_index(std::size_t m) const {
    return m < n_ / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n_);
  }

  double freq_step() const { return M_PI / half_width_; }

  // |xi| at flat spectral index; row-major (m1*n + m2) in 2-d
  double freq_norm(std::size_t flat) const {
    if (dim_ == 1) return std::abs(static_cast<double>(signed_index(flat))) * freq_step();
    const double k1 = static_cast<double>(signed_index(flat / n_));
    const double k2 = static_cast<double>(signed_index(flat % n_));
    return std::sqrt(k1 * k1 + k2 * k2) * freq_step();
  }

  double nyquist() const { return freq_step() * static_cast<double>(n_ / 2); }

  bool operator==(const BoxGrid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
  }
  bool operator!=(const BoxGrid& o) const { return !(*this == o); }

 private:
  int dim_;
  std::size_t n_;
  double half_width_;
  double spacing_;
};

// Real samples on a BoxGrid, row-major.
class Field {
 public:
  Field() = default;
  explicit Field(const BoxGrid& grid, double fill = 0.0) : grid_(grid), samples_(grid.size(), fill) {}
  Field(const BoxGrid& grid, std::vector<double> samples)
      : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid.size()) throw GridMismatch("Field: samples length != n^dim");
  }

  const BoxGrid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

  double at(std::size_t i, std::size_t j) const { return samples_[i * grid_.n() + j]; }
  double& at(std::size_t i, std::size_t j) { return samples_[i * grid_.n() + j]; }

  bool all_finite() const {
    for (double v : samples_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Field& operator+=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
    return *this;
  }
  Field& operator*=(double c) {
    for (double& v : samples_) v *= c;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }

  double max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }

  void require_same_grid(const Field& o) const {
    if (grid_ != o.grid_) throw GridMismatch("Field: operands live on different grids");
  }

 private:
  BoxGrid grid_{1, 8, 1.0};
  std::vector<double> samples_;
};

// Complex coefficients on the frequency lattice, stored in DFT bin order.
// Convention: coeffs approximate the continuum transform
//   f_hat(xi_k) = h^dim * sum_x exp(-i xi_k . x) f(x),
// so that values are resolution-independent for band-limited fields.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const BoxGrid& grid) : grid_(grid), coeffs_(grid.size(), {0.0, 0.0}) {}

  const BoxGrid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  std::complex<double> operator[](std::size_t i) const { return coeffs_[i]; }
  std::complex<double>& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }
  std::span<std::complex<double>> coeffs() { return coeffs_; }

  SpectralField& operator+=(const SpectralField& o) {
    if (grid_ != o.grid_) throw GridMismatch("SpectralField: operands live on different grids");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(double c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
  }

 private:
  BoxGrid grid_{1, 8, 1.0};
  std::vector<std::complex<double>> coeffs_;
};

namespace detail {

// FFTW plan cache, one plan per (dim, n, direction). Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they are reproducible and can execute on
// arbitrary caller buffers. FFTW only guarantees thread safety for the
// execute entry points, so executions take the lock shared while planning
// takes it exclusively.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  void execute(int dim, std::size_t n, int sign, std::complex<double>* in,
               std::complex<double>* out) {
    const auto key = std::make_tuple(dim, n, sign);
    {
      std::shared_lock<std::shared_mutex> lock(mu_);
      auto it = plans_.find(key);
      if (it != plans_.end()) {
        fftw_execute_dft(it->second, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
        return;
      }
    }
    std::unique_lock<std::shared_mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it == plans_.end()) {
      std::vector<std::complex<double>> scratch(dim == 1 ? n : n * n);
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      fftw_plan plan =
          dim == 1 ? fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED)
                   : fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
      it = plans_.emplace(key, plan).first;
    }
    fftw_execute_dft(it->second, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  FftPlans() = default;
  std::shared_mutex mu_;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

inline void execute_dft(int dim, std::size_t n, int sign, std::complex<double>* in,
                        std::complex<double>* out) {
  FftPlans::instance().execute(dim, n, sign, in, out);
}

// parity sign (-1)^(sum of bin indices); encodes the -L origin offset
inline double bin_phase(const BoxGrid& g, std::size_t flat) {
  if (g.dim() == 1) return (flat & 1u) ? -1.0 : 1.0;
  return ((flat / g.n() + flat % g.n()) & 1u) ? -1.0 : 1.0;
}

}  // namespace detail

inline SpectralField forward_transform(const Field& f) {
  const BoxGrid& g = f.grid();
  std::vector<std::complex<double>> buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] = f[i];
  detail::execute_dft(g.dim(), g.n(), FFTW_FORWARD, buf.data(), buf.data());
  SpectralField out(g);
  const double scale = std::pow(g.spacing(), g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = scale * detail::bin_phase(g, i) * buf[i];
  return out;
}

// Inverse of forward_transform. For Hermitian-symmetric input the imaginary
// residue is discarded; a residue above 1e-9 (max norm) signals a symmetry
// bug upstream and raises NonHermitianInput.
inline Field inverse_transform(const SpectralField& F) {
  const BoxGrid& g = F.grid();
  std::vector<std::complex<double>> buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] = detail::bin_phase(g, i) * F[i];
  detail::execute_dft(g.dim(), g.n(), FFTW_BACKWARD, buf.data(), buf.data());
  Field out(g);
  const double scale = 1.0 / std::pow(2.0 * g.half_width(), g.dim());
  double residue = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = scale * buf[i].real();
    residue = std::max(residue, std::abs(scale * buf[i].imag()));
  }
  if (residue > 1e-9)
    throw NonHermitianInput("inverse_transform: imaginary residue " + std::to_string(residue));
  return out;
}

// Periodic convolution carrying the quadrature weight h^dim, i.e. the
// discrete analogue of (f * g)(x) = int f(x-y) g(y) dy.
inline Field convolve(const Field& f, const Field& g) {
  f.require_same_grid(g);
  SpectralField F = forward_transform(f);
  const SpectralField G = forward_transform(g);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= G[i];
  return inverse_transform(F);
}

// h^dim * sum of samples; exact for band-limited periodic integrands.
inline double integrate(const Field& f) {
  return std::pow(f.grid().spacing(), f.grid().dim()) * pairwise_sum(f.samples());
}

inline double l2_norm(const Field& f) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(std::pow(f.grid().spacing(), f.grid().dim()) * pairwise_sum(sq));
}

// Re-express the coefficients of S on a finer grid over the same box. The
// represented trigonometric polynomial is unchanged; the unmatched -n/2 edge
// modes are dropped.
inline SpectralField lift_spectrum(const SpectralField& S, const BoxGrid& fine) {
  const BoxGrid& grid = S.grid();
  if (fine.dim() != grid.dim() || fine.half_width() != grid.half_width() || fine.n() < grid.n())
    throw GridMismatch("lift_spectrum: target must refine the source box");
  SpectralField out(fine);
  const std::size_t n = grid.n();
  if (grid.dim() == 1) {
    for (std::size_t m = 0; m < n; ++m) {
      const long k = grid.signed_index(m);
      if (k == -static_cast<long>(n / 2) && fine.n() != n) continue;
      const std::size_t mf =
          k >= 0 ? static_cast<std::size_t>(k) : fine.n() - static_cast<std::size_t>(-k);
      out[mf] = S[m];
    }
  } else {
    for (std::size_t m1 = 0; m1 < n; ++m1) {
      const long k1 = grid.signed_index(m1);
      if (k1 == -static_cast<long>(n / 2) && fine.n() != n) continue;
      const std::size_t f1 =
          k1 >= 0 ? static_cast<std::size_t>(k1) : fine.n() - static_cast<std::size_t>(-k1);
      for (std::size_t m2 = 0; m2 < n; ++m2) {
        const long k2 = grid.signed_index(m2);
        if (k2 == -static_cast<long>(n / 2) && fine.n() != n) continue;
        const std::size_t f2 =
            k2 >= 0 ? static_cast<std::size_t>(k2) : fine.n() - static_cast<std::size_t>(-k2);
        out[f1 * fine.n() + f2] = S[m1 * n + m2];
      }
    }
  }
  return out;
}

// Sample the band-limited interpolant of f on a finer grid over the same box.
inline Field refine_to(const Field& f, const BoxGrid& fine) {
  return inverse_transform(lift_spectrum(forward_transform(f), fine));
}

// Pointwise product evaluated alias-free: both factors are lifted to the 2x
// grid spectrally, multiplied there, and the result truncated back to the
// original band. Exact when band(f) + band(g) fits below the doubled Nyquist.
inline SpectralField dealiased_product_spectrum(const Field& f, const Field& g) {
  f.require_same_grid(g);
  const BoxGrid& grid = f.grid();
  const BoxGrid fine(grid.dim(), 2 * grid.n(), grid.half_width());

  const SpectralField F = forward_transform(f);
  const SpectralField G = forward_transform(g);

  auto lift = [&](const SpectralField& S) { return lift_spectrum(S, fine); };

  const Field ff = inverse_transform(lift(F));
  const Field gf = inverse_transform(lift(G));
  Field prod(fine);
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = ff[i] * gf[i];
  const SpectralField P = forward_transform(prod);

  SpectralField out(grid);
  const std::size_t n = grid.n();
  if (grid.dim() == 1) {
    for (std::size_t m = 0; m < n; ++m) {
      const long k = grid.signed_index(m);
      if (k == -static_cast<long>(n / 2)) continue;
      const std::size_t mf =
          k >= 0 ? static_cast<std::size_t>(k) : fine.n() - static_cast<std::size_t>(-k);
      out[m] = P[mf];
    }
  } else {
    for (std::size_t m1 = 0; m1 < n; ++m1) {
      const long k1 = grid.signed_index(m1);
      if (k1 == -static_cast<long>(n / 2)) continue;
      const std::size_t f1 =
          k1 >= 0 ? static_cast<std::size_t>(k1) : fine.n() - static_cast<std::size_t>(-k1);
      for (std::size_t m2 = 0; m2 < n; ++m2) {
        const long k2 = grid.signed_index(m2);
        if (k2 == -static_cast<long>(n / 2)) continue;
        const std::size_t f2 =
            k2 >= 0 ? static_cast<std::size_t>(k2) : fine.n() - static_cast<std::size_t>(-k2);
        out[m1 * n + m2] = P[f1 * fine.n() + f2];
      }
    }
  }
  return out;
}

inline Field dealiased_product(const Field& f, const Field& g) {
  return inverse_transform(dealiased_product_spectrum(f, g));
}

// --- "BWF1" binary snapshot -------------------------------------------------
// magic "BWF1", little-endian u32 dim, u32 n, f64 half_width, n^dim f64 samples

inline void save_field(const Field& f, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "BWF1 writer assumes little-endian");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_field: cannot open " + path);
  os.write("BWF1", 4);
  const std::uint32_t dim = static_cast<std::uint32_t>(f.grid().dim());
  const std::uint32_t n = static_cast<std::uint32_t>(f.grid().n());
  const double hw = f.grid().half_width();
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&hw), 8);
  os.write(reinterpret_cast<const char*>(f.samples().data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw IoError("save_field: write failed on " + path);
}

inline Field load_field(const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "BWF1 reader assumes little-endian");
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "BWF1", 4) != 0) throw IoError("load_field: bad magic in " + path);
  std::uint32_t dim = 0, n = 0;
  double hw = 0;
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&hw), 8);
  if (!is) throw IoError("load_field: truncated header in " + path);
  BoxGrid grid(static_cast<int>(dim), n, hw);
  std::vector<double> samples(grid.size());
  is.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(samples.size() * sizeof(double)));
  if (!is) throw IoError("load_field: truncated samples in " + path);
  Field f(grid, std::move(samples));
  if (!f.all_finite()) throw IoError("load_field: non-finite samples in " + path);
  return f;
}

}  // namespace youngwave
