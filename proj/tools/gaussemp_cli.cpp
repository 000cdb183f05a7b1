// gaussemp: Monte Carlo checks of empirical-process bounds for dependent
// Gaussian sequences.
//
// Exit codes: 0 success, 1 bound/invariant violation, 2 configuration or
// model error, 3 I/O error.

#include "gaussemp/error.hpp"
#include "gaussemp/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace gaussemp;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::vector<double> thresholds;
  std::vector<double> deltas;
};

ExperimentConfig resolve(const Options& opt) {
  ExperimentConfig config;
  if (!opt.config_path.empty()) config = load_config(opt.config_path);
  if (opt.seed) config.master_seed = *opt.seed;
  if (opt.workers) config.workers = *opt.workers;
  if (opt.out) config.output_dir = *opt.out;
  if (opt.format) config.format = *opt.format == "json" ? OutputFormat::json : OutputFormat::csv;
  validate_config(config);
  return config;
}

int finish(const ExperimentReport& report, const ExperimentConfig& config) {
  for (const auto& path : write_report(report, config.output_dir, config.format))
    std::cout << "wrote " << path.string() << '\n';
  for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
  if (!report.ok()) {
    std::cerr << report.violations.size() << " violation(s)\n";
    return 1;
  }
  return 0;
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::output_write_failed: return 3;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification of empirical-process bounds for Gaussian sequences"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON experiment config");
    sub->add_option("--seed", opt.seed, "master seed (overrides config)");
    sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* bounds = app.add_subcommand("verify-bounds", "Monte Carlo check of the sup bounds");
  auto* convergence = app.add_subcommand("convergence", "E sup across n and log-log slope");
  auto* tails = app.add_subcommand("tails", "pointwise vs uniform tail probabilities");
  auto* tightness = app.add_subcommand("tightness", "block construction rate study");
  auto* hermite = app.add_subcommand("hermite-check", "Hermite identities and residual tables");
  auto* delta = app.add_subcommand("delta", "growth diagnostics and a.s. partial sums");
  for (auto* sub : {bounds, convergence, tails, tightness, hermite, delta}) add_common(sub);
  tails->add_option("--threshold", opt.thresholds, "tail threshold(s) in (0,1)");
  tightness->add_option("--delta", opt.deltas, "Delta target(s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig config = resolve(opt);
    if (*bounds) return finish(run_bound_experiment(config), config);
    if (*convergence) return finish(run_convergence_study(config), config);
    if (*tails) {
      const std::vector<double>& t = opt.thresholds.empty() ? config.tail_thresholds : opt.thresholds;
      return finish(run_tail_study(config, t), config);
    }
    if (*tightness) {
      const std::vector<double>& d = opt.deltas.empty() ? config.delta_targets : opt.deltas;
      return finish(run_remark_tightness(config, d), config);
    }
    if (*hermite) return finish(run_hermite_check(config), config);
    if (*delta) return finish(run_delta_diagnostics(config), config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
