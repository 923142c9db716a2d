#include <catch2/catch.hpp>

#include <cmath>

#include "youngwave/mollifier.hpp"

using namespace youngwave;

namespace {

// quadrature of x^r phi(x) on the mollifier's own grid (d=1) or x1^r1 x2^r2 (d=2)
double grid_moment_1d(const Field& f, int r) {
  const BoxGrid& g = f.grid();
  Field m(g);
  for (std::size_t i = 0; i < g.n(); ++i) m[i] = std::pow(g.coord(i), r) * f[i];
  return integrate(m);
}

double grid_moment_2d(const Field& f, int r1, int r2) {
  const BoxGrid& g = f.grid();
  Field m(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.coord(i / g.n()), y = g.coord(i % g.n());
    m[i] = std::pow(x, r1) * std::pow(y, r2) * f[i];
  }
  return integrate(m);
}

}  // namespace

TEST_CASE("mollifier construction validates the grid", "[mollifier]") {
  CHECK_THROWS_AS(make_mollifier(1, BoxGrid(1, 16, 4.0)), ParamOutOfRange);  // h = 1/2, too coarse
  CHECK_THROWS_AS(make_mollifier(1, BoxGrid(1, 1024, 1.0)), ParamOutOfRange);  // B_2 does not fit
  CHECK_THROWS_AS(make_mollifier(0, BoxGrid(1, 1024, 4.0)), ParamOutOfRange);
  CHECK_NOTHROW(make_mollifier(1, BoxGrid(1, 1024, 4.0)));
}

TEST_CASE("phi_0 has unit integral and support in B_1", "[mollifier]") {
  for (int dim : {1, 2}) {
    const BoxGrid g(dim, dim == 1 ? 2048 : 512, 4.0);
    const Mollifier m = make_mollifier(1, g);
    CHECK(std::abs(integrate(m.phi0())) > 1e-6);
    CHECK(integrate(m.phi0()) == Approx(1.0).epsilon(1e-8));
    const BoxGrid& grid = m.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double r;
      if (dim == 1) {
        r = std::abs(grid.coord(i));
      } else {
        const double x = grid.coord(i / grid.n()), y = grid.coord(i % grid.n());
        r = std::sqrt(x * x + y * y);
      }
      if (r >= 1.0) CHECK(m.phi0()[i] == 0.0);
      if (r >= 2.0) CHECK(m.phi()[i] == 0.0);
    }
  }
}

TEST_CASE("L=1: integral and first moment of phi vanish", "[mollifier]") {
  const BoxGrid g(1, 2048, 4.0);
  const Mollifier m = make_mollifier(1, g);
  CHECK(std::abs(grid_moment_1d(m.phi(), 0)) < 1e-10);  // telescoping of the two dilates
  CHECK(std::abs(grid_moment_1d(m.phi(), 1)) < 1e-10);  // even symmetry
}

TEST_CASE("L=3, d=1: second moment of phi vanishes by quadrature", "[mollifier]") {
  const BoxGrid g(1, 2048, 4.0);
  const Mollifier m = make_mollifier(3, g);
  CHECK(std::abs(grid_moment_1d(m.phi(), 0)) < 1e-10);
  CHECK(std::abs(grid_moment_1d(m.phi(), 1)) < 1e-10);
  CHECK(std::abs(grid_moment_1d(m.phi(), 2)) < 1e-8);
  CHECK(std::abs(grid_moment_1d(m.phi(), 3)) < 1e-8);
  // without the polynomial correction the second moment does not vanish
  const Mollifier m1 = make_mollifier(1, g);
  CHECK(std::abs(grid_moment_1d(m1.phi(), 2)) > 1e-4);
}

TEST_CASE("L=4, d=2: moments up to order 4 vanish", "[mollifier]") {
  const BoxGrid g(2, 512, 4.0);
  const Mollifier m = make_mollifier(4, g);
  for (int r1 = 0; r1 <= 4; ++r1)
    for (int r2 = 0; r1 + r2 <= 4; ++r2)
      CHECK(std::abs(grid_moment_2d(m.phi(), r1, r2)) < 1e-7);
}

TEST_CASE("radial Fourier table matches the grid transform of phi_0", "[mollifier]") {
  for (int dim : {1, 2}) {
    const BoxGrid g(dim, dim == 1 ? 2048 : 512, 4.0);
    const Mollifier m = make_mollifier(2, g);
    CHECK(m.phi0_hat(0.0) == Approx(1.0).epsilon(1e-10));
    const SpectralField F = forward_transform(m.phi0());
    for (std::size_t i : {std::size_t{1}, std::size_t{3}, std::size_t{10}}) {
      const double xi = g.freq_norm(i);
      CHECK(m.phi0_hat(xi) == Approx(F[i].real()).margin(1e-8));
      CHECK(std::abs(F[i].imag()) < 1e-9);
    }
  }
}

TEST_CASE("j_max follows the documented truncation rule", "[mollifier]") {
  const BoxGrid g(1, 2048, 8.0);
  const Mollifier m = make_mollifier(1, g);
  const int expected = static_cast<int>(std::floor(std::log2(g.nyquist()))) - 2;
  CHECK(m.j_max() == expected);
  CHECK(m.j_max() >= 0);
}
