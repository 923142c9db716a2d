#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "youngwave/young.hpp"

namespace youngwave {

// Position/velocity data with their Sobolev sizes measured spectrally.
struct InitialData {
  Field u0;
  Field u1;
  double u0_sobolev = 0.0;  // ||u0||_{H^{1+kappa}}
  double u1_sobolev = 0.0;  // ||u1||_{H^kappa}

  InitialData(Field position, Field velocity, double kappa)
      : u0(std::move(position)), u1(std::move(velocity)) {
    u0.require_same_grid(u1);
    u0_sobolev = sobolev_norm(u0, 1.0 + kappa);
    u1_sobolev = sobolev_norm(u1, kappa);
    if (!std::isfinite(u0_sobolev) || !std::isfinite(u1_sobolev))
      throw ParamOutOfRange("InitialData: Sobolev norms must be finite");
  }
};

// u^{(0)}_t = (d/dt G)_t u0 + G_t u1
inline Field initial_wave(const InitialData& data, double t) {
  return apply_dtG(t, data.u0) + apply_G(t, data.u1);
}

inline ProcessPath initial_wave_path(const InitialData& data, const DyadicPartition& part,
                                     unsigned threads = 0) {
  std::vector<Field> values(part.count(), Field(data.u0.grid()));
  parallel_for(
      part.count(),
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) values[i] = initial_wave(data, part.point(i));
      },
      threads);
  return ProcessPath(part, std::move(values));
}

// Parameter tuple produced by the admissibility constructor.
struct AdmissibleParams {
  double kappa;
  double alpha;
  double gamma;
  double theta;
  double p;
  double delta;
};

struct Infeasible {
  std::string violated;
};

using AdmissibilityVerdict = std::variant<AdmissibleParams, Infeasible>;

// Constructive parameter choice for the noise threshold alpha_d: feasible iff
// 0 < alpha_d < (rho_d - a0) / 2; then theta = 1 - a0/2 - eps and
// alpha = alpha_d + eps with eps a quarter of the slack, and (p, delta) are
// the smallest dyadic choices meeting every convergence condition.
inline AdmissibilityVerdict admissible_params(int dim, double a0, double alpha_d) {
  const double rho = rho_d(dim);
  if (!(a0 > 0.0 && a0 < 2.0)) return Infeasible{"a0 must lie in (0,2)"};
  if (!(alpha_d > 0.0)) return Infeasible{"alpha_d must be positive"};
  if (!(a0 < rho)) return Infeasible{"a0 < rho_d"};
  if (!(alpha_d < 0.5 * (rho - a0))) return Infeasible{"alpha_d < (rho_d - a0)/2"};

  const double eps = 0.25 * (0.5 * (rho - a0) - alpha_d);
  const double theta = 1.0 - 0.5 * a0 - eps;
  const double alpha = alpha_d + eps;

  for (double p = 8.0; p <= std::ldexp(1.0, 24); p *= 2.0) {
    for (int k = 1; k <= 40; ++k) {
      const double delta = std::ldexp(1.0, -k);
      if (!(theta - alpha > 1.0 - 0.5 * rho + 0.5 * dim / p + delta)) continue;
      const double kappa = alpha + dim / p + delta;
      const double gamma = 1.0 - theta + delta;
      const YoungConditions cond{gamma, kappa, theta, alpha, p, dim};
      if (!young_condition_violation(cond).empty()) continue;
      return AdmissibleParams{kappa, alpha, gamma, theta, p, delta};
    }
  }
  return Infeasible{"no (p, delta) satisfied the convergence conditions"};
}

struct SolveConfig {
  int dim;
  double a0;
  SpectralMeasure measure;
  AdmissibleParams params;
  BoxGrid grid;
  int level;        // dyadic partition level of the solve
  double horizon;   // T
  double picard_tol = 1e-6;
  int picard_max = 12;
  std::uint64_t seed = 1;
  double weight_a = 1.0;  // mu_t = a + b t
  double weight_b = 1.0;

  PathSpaceSpec path_spec() const {
    return PathSpaceSpec(params.gamma, params.kappa, weight_a, weight_b, horizon);
  }

  void validate() const {
    if (dim != grid.dim()) throw ConfigInvalid("SolveConfig: dim differs from grid dim");
    if (!(horizon > 0.0 && horizon <= 1.0))
      throw ConfigInvalid("SolveConfig: horizon must lie in (0,1] (kernel estimates)");
    if (!(params.p > dim + 1)) throw ConfigInvalid("SolveConfig: p > d+1 required");
    const YoungConditions cond{params.gamma, params.kappa, params.theta,
                               params.alpha, params.p,    dim};
    const std::string violated = young_condition_violation(cond);
    if (!violated.empty()) throw ConfigInvalid("SolveConfig: violated condition: " + violated);
  }
};

struct Solution {
  ProcessPath path;
  std::vector<double> iterates_delta;  // ||u^{(l+1)} - u^{(l)}||_E
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// ||u - (u^{(0)} + J[u])||_E on the path's own partition
inline double residual(const ProcessPath& u, const InitialData& data, const NoisePath& W,
                       const SolveConfig& cfg, const Mollifier& m, unsigned threads = 0) {
  const ProcessPath integral = riemann_path(u, W, u.partition.level, u.partition.level, threads);
  std::vector<Field> defect;
  defect.reserve(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    Field rhs = initial_wave(data, u.partition.point(i));
    rhs += integral.values[i];
    defect.push_back(u.values[i] - rhs);
  }
  return path_norm(u.partition.points(), defect, cfg.path_spec(), m, threads);
}

// Picard iteration for the mild equation at a fixed dyadic level:
//   u^{(l+1)}_t = (d/dt G)_t u0 + G_t u1 + J^{(n)}[u^{(l)}]_t.
// Stops when the E-norm of the update falls below picard_tol; raises
// PicardDiverged after three consecutive growing updates.
inline Solution picard_solve(const InitialData& data, const NoisePath& W, const SolveConfig& cfg,
                             const Mollifier& m, unsigned threads = 0,
                             const std::optional<ProcessPath>& initial_guess = std::nullopt) {
  cfg.validate();
  const DyadicPartition part(cfg.horizon, cfg.level);
  const ProcessPath base = initial_wave_path(data, part, threads);
  const PathSpaceSpec spec = cfg.path_spec();

  ProcessPath current = initial_guess ? *initial_guess : base;
  if (current.partition.level != cfg.level)
    throw PartitionMismatch("picard_solve: initial guess lives on the wrong partition");

  Solution sol{current, {}, 0.0, false, 0};
  int increases = 0;
  for (int iter = 0; iter < cfg.picard_max; ++iter) {
    const ProcessPath integral = riemann_path(current, W, cfg.level, cfg.level, threads);
    std::vector<Field> next_vals;
    next_vals.reserve(part.count());
    for (std::size_t i = 0; i < part.count(); ++i)
      next_vals.push_back(base.values[i] + integral.values[i]);
    ProcessPath next(part, std::move(next_vals));

    std::vector<Field> delta;
    delta.reserve(part.count());
    for (std::size_t i = 0; i < part.count(); ++i)
      delta.push_back(next.values[i] - current.values[i]);
    const double dnorm = path_norm(part.points(), delta, spec, m, threads);
    sol.iterates_delta.push_back(dnorm);
    sol.iterations = iter + 1;

    if (!sol.iterates_delta.empty() && sol.iterates_delta.size() >= 2 &&
        dnorm > sol.iterates_delta[sol.iterates_delta.size() - 2]) {
      if (++increases >= 3)
        throw PicardDiverged("picard_solve: updates grew for 3 consecutive iterations");
    } else {
      increases = 0;
    }

    current = std::move(next);
    if (dnorm < cfg.picard_tol) {
      sol.converged = true;
      break;
    }
  }

  sol.path = std::move(current);
  sol.residual = residual(sol.path, data, W, cfg, m, threads);
  return sol;
}

}  // namespace youngwave
