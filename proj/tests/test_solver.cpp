#include <catch2/catch.hpp>

#include <cmath>
#include <cstring>

#include "youngwave/solver.hpp"

using namespace youngwave;

namespace {

Field gaussian_bump(const BoxGrid& g, double sigma, double amp = 1.0, double center = 0.0) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = (g.dim() == 1 ? g.coord(i) : g.coord(i / g.n())) - center;
    const double y = g.dim() == 1 ? 0.0 : g.coord(i % g.n());
    f[i] = amp * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
  }
  return f;
}

NoisePath zero_noise(const BoxGrid& g, double horizon, int time_level, double a0 = 0.3) {
  const DyadicPartition part(horizon, time_level);
  NoiseConfig cfg{a0, SpectralMeasure::radial_riesz(0.5, g.dim()), 2, 1, g, part.points()};
  return NoisePath{cfg, std::vector<Field>(part.count(), Field(g)), {}};
}

NoisePath sampled_noise(const BoxGrid& g, double horizon, int time_level, int level,
                        std::uint64_t seed, double a0 = 0.3, double a = 0.5) {
  const DyadicPartition part(horizon, time_level);
  NoiseConfig cfg{a0, SpectralMeasure::radial_riesz(a, g.dim()), level, seed, g, part.points()};
  return sample_path(cfg);
}

SolveConfig base_config(const BoxGrid& g, int level, double T, double a0 = 0.3,
                        double alpha_d = 0.25) {
  const auto verdict = admissible_params(g.dim(), a0, alpha_d);
  REQUIRE(std::holds_alternative<AdmissibleParams>(verdict));
  return SolveConfig{g.dim(),
                     a0,
                     SpectralMeasure::radial_riesz(2.0 * alpha_d, g.dim()),
                     std::get<AdmissibleParams>(verdict),
                     g,
                     level,
                     T};
}

}  // namespace

TEST_CASE("admissible_params constructive choices", "[solver]") {
  SECTION("d=1, a0=0.3, alpha_d=0.25 is feasible and satisfies every condition") {
    const auto verdict = admissible_params(1, 0.3, 0.25);
    REQUIRE(std::holds_alternative<AdmissibleParams>(verdict));
    const auto prm = std::get<AdmissibleParams>(verdict);
    CHECK(prm.theta == Approx(1.0 - 0.15 - 0.025));
    CHECK(prm.alpha == Approx(0.275));
    CHECK(prm.p >= 8.0);
    const YoungConditions cond{prm.gamma, prm.kappa, prm.theta, prm.alpha, prm.p, 1};
    CHECK(young_condition_violation(cond).empty());
    // direct substitution of the four conditions
    CHECK(prm.kappa + prm.alpha + prm.gamma + 0.0 < prm.theta);
    CHECK(prm.gamma + prm.theta > 1.0);
    CHECK(prm.kappa > prm.alpha + 1.0 / prm.p);
    CHECK(prm.gamma < 1.0 - 2.0 / prm.p);
  }

  SECTION("d=2, a0=0.3, a=0.4 is infeasible") {
    const auto verdict = admissible_params(2, 0.3, 0.2);
    REQUIRE(std::holds_alternative<Infeasible>(verdict));
    CHECK(std::get<Infeasible>(verdict).violated == "alpha_d < (rho_d - a0)/2");
  }

  SECTION("the boundary a0 + a = rho_d is excluded") {
    // d=1: a0 = 0.4, a = 0.6 sits exactly on a0 + a = 1
    const auto verdict = admissible_params(1, 0.4, 0.3);
    CHECK(std::holds_alternative<Infeasible>(verdict));
  }

  SECTION("feasibility is monotone in a0 and alpha_d") {
    for (double a0 : {0.1, 0.3, 0.5}) {
      for (double alpha_d : {0.05, 0.15, 0.24}) {
        if (std::holds_alternative<AdmissibleParams>(admissible_params(1, a0, alpha_d))) {
          CHECK(std::holds_alternative<AdmissibleParams>(
              admissible_params(1, a0 - 0.05, alpha_d)));
          CHECK(std::holds_alternative<AdmissibleParams>(
              admissible_params(1, a0, alpha_d - 0.02)));
        }
      }
    }
  }
}

TEST_CASE("initial wave propagation", "[solver]") {
  const BoxGrid g(1, 2048, 8.0);

  SECTION("t=0 returns u0 exactly") {
    const InitialData data(gaussian_bump(g, 0.5), gaussian_bump(g, 0.3, 0.4), 0.35);
    const Field w = initial_wave(data, 0.0);
    CHECK(std::memcmp(w.samples().data(), data.u0.samples().data(),
                      w.size() * sizeof(double)) == 0);
  }

  SECTION("u1 = 0 reproduces the d'Alembert average of translates") {
    const double sigma = 0.5, t = 0.6;
    const InitialData data(gaussian_bump(g, sigma), Field(g), 0.35);
    const Field w = initial_wave(data, t);
    for (std::size_t i = 256; i < g.n(); i += 97) {
      const double x = g.coord(i);
      const double expected = 0.5 * (std::exp(-(x - t) * (x - t) / (2.0 * sigma * sigma)) +
                                     std::exp(-(x + t) * (x + t) / (2.0 * sigma * sigma)));
      CHECK(w[i] == Approx(expected).margin(1e-8));
    }
  }

  SECTION("path norm controlled by the Sobolev size of the data") {
    const BoxGrid coarse(1, 1024, 8.0);
    const Mollifier mc = make_mollifier(1, coarse);
    const Mollifier mf = make_mollifier(1, g);
    const double kappa = 0.35;
    const PathSpaceSpec spec(0.2, kappa, 1.0, 1.0, 1.0);
    const InitialData data_c(gaussian_bump(coarse, 0.5), gaussian_bump(coarse, 0.3, 0.4), kappa);
    const DyadicPartition part(1.0, 4);
    const ProcessPath path_c = initial_wave_path(data_c, part);
    const double ratio_c = path_norm(part.points(), path_c.values, spec, mc) /
                           (data_c.u0_sobolev + data_c.u1_sobolev);

    const InitialData data_f(refine_to(data_c.u0, g), refine_to(data_c.u1, g), kappa);
    const ProcessPath path_f = initial_wave_path(data_f, part);
    const double ratio_f = path_norm(part.points(), path_f.values, spec, mf) /
                           (data_f.u0_sobolev + data_f.u1_sobolev);
    CHECK(std::isfinite(ratio_c));
    CHECK(ratio_f == Approx(ratio_c).epsilon(0.2));
  }
}

TEST_CASE("picard solve with zero noise", "[solver]") {
  const BoxGrid g(1, 2048, 8.0);
  const Mollifier m = make_mollifier(1, g);
  const double T = 0.5;
  const SolveConfig cfg = base_config(g, 4, T);
  const double sigma = 0.4;
  const InitialData data(gaussian_bump(g, sigma), gaussian_bump(g, sigma, 0.7), cfg.params.kappa);
  const NoisePath W = zero_noise(g, T, 4);

  const Solution sol = picard_solve(data, W, cfg, m);
  CHECK(sol.converged);
  CHECK(sol.iterations == 1);
  CHECK(sol.residual <= 2.0 * cfg.picard_tol);

  // d'Alembert with both position and velocity data
  const double t = T;
  const Field& last = sol.path.values.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.coord(i);
    const double pos = 0.5 * (std::exp(-(x - t) * (x - t) / (2.0 * sigma * sigma)) +
                              std::exp(-(x + t) * (x + t) / (2.0 * sigma * sigma)));
    const double vel = 0.7 * sigma * std::sqrt(M_PI / 2.0) *
                       (std::erf((x + t) / (sigma * std::sqrt(2.0))) -
                        std::erf((x - t) / (sigma * std::sqrt(2.0)))) *
                       0.5;
    worst = std::max(worst, std::abs(last[i] - (pos + vel)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("picard solve with sampled noise", "[solver]") {
  const BoxGrid g(1, 512, 8.0);
  const Mollifier m = make_mollifier(1, g);
  const double T = 0.5;
  SolveConfig cfg = base_config(g, 4, T);
  const InitialData data(gaussian_bump(g, 0.5), Field(g), cfg.params.kappa);
  const NoisePath W = sampled_noise(g, T, 4, 3, 101);

  SECTION("updates contract and the residual closes") {
    const Solution sol = picard_solve(data, W, cfg, m);
    CHECK(sol.converged);
    REQUIRE(sol.iterates_delta.size() >= 3);
    for (std::size_t i = 0; i + 1 < sol.iterates_delta.size(); ++i)
      CHECK(sol.iterates_delta[i + 1] < sol.iterates_delta[i]);
    CHECK(sol.residual <= 2.0 * cfg.picard_tol);

    // purity: evaluating the residual twice gives the same number
    const double r1 = residual(sol.path, data, W, cfg, m);
    const double r2 = residual(sol.path, data, W, cfg, m);
    CHECK(r1 == r2);
  }

  SECTION("two initial guesses land on the same fixed point") {
    const Solution from_wave = picard_solve(data, W, cfg, m);
    const DyadicPartition part(T, cfg.level);
    const ProcessPath zero_guess(part, std::vector<Field>(part.count(), Field(g)));
    const Solution from_zero = picard_solve(data, W, cfg, m, 0, zero_guess);
    CHECK(from_zero.converged);
    std::vector<Field> diff;
    for (std::size_t i = 0; i < part.count(); ++i)
      diff.push_back(from_wave.path.values[i] - from_zero.path.values[i]);
    const double gap = path_norm(part.points(), diff, cfg.path_spec(), m);
    CHECK(gap <= 10.0 * cfg.picard_tol);
  }

  SECTION("residual of the zero path is the size of the initial wave") {
    const DyadicPartition part(T, cfg.level);
    const ProcessPath zero_path(part, std::vector<Field>(part.count(), Field(g)));
    const NoisePath W0 = zero_noise(g, T, 4);
    const double r = residual(zero_path, data, W0, cfg, m);
    const ProcessPath wave = initial_wave_path(data, part);
    const double expected = path_norm(part.points(), wave.values, cfg.path_spec(), m);
    CHECK(r == Approx(expected).epsilon(1e-12));
  }

  SECTION("amplified noise loses the contraction") {
    NoisePath loud = W;
    for (auto& s : loud.slices) s *= 200.0;
    CHECK_THROWS_AS(picard_solve(data, loud, cfg, m), PicardDiverged);
  }

  SECTION("linear response at small noise amplitude") {
    const Solution sol0 = picard_solve(data, zero_noise(g, T, 4), cfg, m);
    const ProcessPath j0 = riemann_path(sol0.path, W, cfg.level, cfg.level);
    const DyadicPartition part(T, cfg.level);
    auto response_error = [&](double lambda) {
      NoisePath scaled = W;
      for (auto& s : scaled.slices) s *= lambda;
      SolveConfig tight = cfg;
      tight.picard_tol = 1e-12;
      tight.picard_max = 20;
      const Solution sol = picard_solve(data, scaled, tight, m);
      std::vector<Field> diff;
      for (std::size_t i = 0; i < part.count(); ++i) {
        Field d = sol.path.values[i] - sol0.path.values[i];
        d *= 1.0 / lambda;
        d -= j0.values[i];
        diff.push_back(std::move(d));
      }
      return path_norm(part.points(), diff, cfg.path_spec(), m);
    };
    const double e2 = response_error(1e-2);
    const double e3 = response_error(1e-3);
    CHECK(e2 / e3 == Approx(10.0).epsilon(0.5));  // first-order in lambda
  }
}

TEST_CASE("picard solve in two dimensions", "[solver]") {
  const BoxGrid g(2, 64, 4.0);
  const Mollifier m = make_mollifier(1, g);
  const double T = 0.5;
  const auto verdict = admissible_params(2, 0.1, 0.15);
  REQUIRE(std::holds_alternative<AdmissibleParams>(verdict));
  SolveConfig cfg{2,
                  0.1,
                  SpectralMeasure::radial_riesz(0.3, 2),
                  std::get<AdmissibleParams>(verdict),
                  g,
                  3,
                  T};
  const InitialData data(gaussian_bump(g, 0.5), Field(g), cfg.params.kappa);
  const DyadicPartition part(T, 3);
  NoiseConfig ncfg{0.1, SpectralMeasure::radial_riesz(0.3, 2), 3, 5, g, part.points()};
  const NoisePath W = sample_path(ncfg);
  const Solution sol = picard_solve(data, W, cfg, m);
  CHECK(sol.converged);
  CHECK(sol.residual <= 2.0 * cfg.picard_tol);
  for (std::size_t i = 0; i + 1 < sol.iterates_delta.size(); ++i)
    CHECK(sol.iterates_delta[i + 1] < sol.iterates_delta[i]);
}

TEST_CASE("solve config validation", "[solver]") {
  const BoxGrid g(1, 512, 8.0);
  SolveConfig cfg = base_config(g, 4, 0.5);
  CHECK_NOTHROW(cfg.validate());
  SolveConfig bad = cfg;
  bad.horizon = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigInvalid);
  bad = cfg;
  bad.params.theta = 0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigInvalid);
}
