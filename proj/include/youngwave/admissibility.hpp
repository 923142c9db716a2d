#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "youngwave/solver.hpp"

namespace youngwave {

// head + extrapolated tail of int (1+|beta|)^(-c) mu(dbeta) for the radial
// Riesz measure; the integrand is an exact power law beyond the truncation
// radius 2^16, so the tail is closed-form
struct SpectralIntegral {
  double head = 0.0;
  double tail = 0.0;
  bool finite = false;
  double value() const { return head + tail; }
};

inline SpectralIntegral spectral_integral(const SpectralMeasure& measure, double c) {
  if (measure.kind() != SpectralMeasure::Kind::RadialRiesz)
    throw ParamOutOfRange("spectral_integral: numerical check is defined for radial measures");
  const int dim = measure.dim();
  const double a = measure.radial_exponent();
  const double omega = dim == 1 ? 2.0 : 2.0 * M_PI;
  const double radius = std::ldexp(1.0, 16);

  auto integrand = [&](double r) { return std::pow(r, a - 1.0) * std::pow(1.0 + r, -c); };
  SpectralIntegral out;
  // exact power-law head over [0,1]; (1+r)^(-c) is smooth there
  out.head = detail::gl_composite(integrand, 0.0, 1.0, 8);
  for (int k = 0; k < 16; ++k)
    out.head += detail::gl_composite(integrand, std::ldexp(1.0, k), std::ldexp(1.0, k + 1), 4);
  out.head *= omega;

  const double tail_exponent = a - c;  // integrand ~ r^(a-1-c) at infinity
  out.finite = tail_exponent < 0.0;
  out.tail = out.finite ? omega * std::pow(radius, tail_exponent) / (c - a) : 0.0;
  return out;
}

// does int (1+|beta|)^{-(rho_d - a0 - eta)} mu(dbeta) converge for some eta > 0?
inline bool spectral_condition_holds(const SpectralMeasure& measure, double a0) {
  const int dim = measure.dim();
  const double rho = rho_d(dim);
  if (measure.kind() == SpectralMeasure::Kind::RadialRiesz) {
    for (double eta : {1e-2, 1e-3})
      if (spectral_integral(measure, rho - a0 - eta).finite) return true;
    return false;
  }
  // product measures: the scaling exponent settles convergence
  return measure.scaling_exponent() < rho - a0;
}

struct FeasibilityCell {
  double a0;
  double a;
  bool feasible;
  AdmissibleParams params{};  // valid when feasible
  std::string violated;       // valid when infeasible
};

struct FeasibilityGrid {
  int dim;
  std::size_t n_a0;
  std::size_t n_a;
  std::vector<FeasibilityCell> cells;  // row-major over (a0, a)
  double max_boundary_gap;             // max |a0 + a - rho_d| across verdict flips

  const FeasibilityCell& at(std::size_t i, std::size_t j) const { return cells[i * n_a + j]; }
};

// Evaluate admissible_params with alpha_d = a/2 over an (a0, a) lattice and
// locate the feasibility boundary.
inline FeasibilityGrid sweep(int dim, std::size_t n_a0, std::size_t n_a, unsigned threads = 0) {
  const double rho = rho_d(dim);
  FeasibilityGrid grid{dim, n_a0, n_a, {}, 0.0};
  grid.cells.resize(n_a0 * n_a);

  const double a0_max = 2.0, a_max = 2.0 * dim;
  parallel_for(
      n_a0,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          const double a0 = a0_max * (static_cast<double>(i) + 0.5) / static_cast<double>(n_a0);
          for (std::size_t j = 0; j < n_a; ++j) {
            const double a = a_max * (static_cast<double>(j) + 0.5) / static_cast<double>(n_a);
            FeasibilityCell cell{a0, a, false, {}, ""};
            const AdmissibilityVerdict verdict = admissible_params(dim, a0, 0.5 * a);
            if (const auto* params = std::get_if<AdmissibleParams>(&verdict)) {
              cell.feasible = true;
              cell.params = *params;
            } else {
              cell.violated = std::get<Infeasible>(verdict).violated;
            }
            grid.cells[i * n_a + j] = std::move(cell);
          }
        }
      },
      threads);

  // boundary: along each a0 row, the verdict flip must straddle a0 + a = rho
  const double cell_a = a_max / static_cast<double>(n_a);
  double max_gap = 0.0;
  for (std::size_t i = 0; i < n_a0; ++i) {
    for (std::size_t j = 0; j + 1 < n_a; ++j) {
      const auto& lo = grid.at(i, j);
      const auto& hi = grid.at(i, j + 1);
      if (lo.feasible != hi.feasible) {
        const double edge = 0.5 * (lo.a + hi.a);  // lattice edge between the cells
        max_gap = std::max(max_gap, std::abs(lo.a0 + edge - rho));
      }
    }
  }
  grid.max_boundary_gap = max_gap;
  (void)cell_a;
  return grid;
}

inline void write_feasibility_csv(const FeasibilityGrid& grid, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("write_feasibility_csv: cannot open " + path);
  os << "a0,a,verdict,kappa,alpha,gamma,theta,p\n";
  char line[256];
  for (const auto& cell : grid.cells) {
    if (cell.feasible) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,feasible,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    cell.a0, cell.a, cell.params.kappa, cell.params.alpha, cell.params.gamma,
                    cell.params.theta, cell.params.p);
    } else {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,infeasible,,,,,\n", cell.a0, cell.a);
    }
    os << line;
  }
}

inline void write_feasibility_gnuplot(const FeasibilityGrid& grid, const std::string& csv_name,
                                      const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("write_feasibility_gnuplot: cannot open " + path);
  const double rho = rho_d(grid.dim);
  os << "set datafile separator ','\n"
     << "set xlabel 'a0'\nset ylabel 'a'\n"
     << "set title 'feasible region, d=" << grid.dim << "'\n"
     << "set key off\n"
     << "rho = " << rho << "\n"
     << "plot '" << csv_name
     << "' using 1:((stringcolumn(3) eq 'feasible') ? $2 : 1/0) with points pt 5 ps 0.4 lc rgb "
        "'blue', \\\n"
     << "     rho - x with lines lw 2 lc rgb 'red'\n";
}

}  // namespace youngwave
