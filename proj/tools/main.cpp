// Command-line driver: reproducible verification runs for the wave-equation
// numerics. Every command reads one config file (JSON tree), accepts
// --key=value overrides, and writes CSV tables plus one summary.json into the
// output directory. Exit codes: 0 success, 1 threshold failure, 2 bad config.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "youngwave/cli/commands.hpp"

namespace {

struct Invocation {
  std::string config_path;
  youngwave::cli::CommonOptions options;
  std::uint64_t seed_value = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
};

int dispatch(const Invocation& inv,
             const std::function<int(const youngwave::cli::Json&,
                                     const youngwave::cli::CommonOptions&)>& command) {
  using namespace youngwave;
  try {
    cli::Json cfg = cli::load_config(inv.config_path);
    cli::apply_overrides(cfg, inv.overrides);
    cli::CommonOptions opt = inv.options;
    if (inv.seed_set) opt.seed = inv.seed_value;
    return command(cfg, opt);
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return cli::kExitConfigInvalid;
  } catch (const ParamOutOfRange& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return cli::kExitConfigInvalid;
  } catch (const IoError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return cli::kExitConfigInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return cli::kExitThresholdFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"young-regime stochastic wave equation workbench"};
  app.require_subcommand(1);

  Invocation inv;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "config file (JSON)");
    sub->add_option("--out", inv.options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", inv.seed_value, "master seed override")
        ->each([&](const std::string&) { inv.seed_set = true; });
    sub->add_option("--threads", inv.options.threads, "worker threads (0 = hardware)");
    sub->add_option("--format", inv.options.format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->allow_extras();
  };

  CLI::App* kernel = app.add_subcommand(
      "kernel-check", "propagator L1/Hoelder identities, K-quantity, Strichartz slopes");
  CLI::App* noise = app.add_subcommand("noise", "noise sampling, covariance MC, level decay");
  CLI::App* young = app.add_subcommand("young", "dyadic Riemann-sum Cauchy study");
  CLI::App* solve = app.add_subcommand("solve", "Picard solve with solution export");
  CLI::App* params = app.add_subcommand("params", "admissibility verdicts and sweeps");
  for (CLI::App* sub : {kernel, noise, young, solve, params}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  inv.overrides = active->remaining();

  using youngwave::cli::CommonOptions;
  using youngwave::cli::Json;
  if (active == kernel)
    return dispatch(inv, [](const Json& c, const CommonOptions& o) {
      return youngwave::cli::cmd_kernel_check(c, o);
    });
  if (active == noise)
    return dispatch(
        inv, [](const Json& c, const CommonOptions& o) { return youngwave::cli::cmd_noise(c, o); });
  if (active == young)
    return dispatch(
        inv, [](const Json& c, const CommonOptions& o) { return youngwave::cli::cmd_young(c, o); });
  if (active == solve)
    return dispatch(
        inv, [](const Json& c, const CommonOptions& o) { return youngwave::cli::cmd_solve(c, o); });
  return dispatch(
      inv, [](const Json& c, const CommonOptions& o) { return youngwave::cli::cmd_params(c, o); });
}
