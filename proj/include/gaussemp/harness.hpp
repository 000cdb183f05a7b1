#pragma once

#include "gaussemp/covmodels.hpp"
#include "gaussemp/quadrature.hpp"
#include "gaussemp/report.hpp"
#include "gaussemp/sampler.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gaussemp {

struct HermiteCheckSettings {
  std::vector<double> epsilons{0.1, 0.25};
  std::vector<double> t_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<int> degrees{50, 100, 200};
  std::vector<double> sigmas{-0.9, -0.5, 0.0, 0.3, 0.7, 1.0};
  int quadrature_order = kDefaultHermiteOrder;
  int max_pair_degree = 10;
  int max_orthonormal_degree = 20;
  double relative_tolerance = 1e-3;
};

struct ExperimentConfig {
  std::vector<FamilySpec> families;
  std::vector<Index> n_list{100, 1000, 10000};
  int replications = 1000;
  std::uint64_t master_seed = 20240601;
  std::optional<double> fixed_epsilon;  // unset: eps* policy
  double tol = 1e-3;
  std::vector<double> tail_thresholds;
  int pointwise_grid = 512;
  std::vector<double> delta_targets;
  std::vector<double> delta_multipliers;
  double gamma = 2.0;
  int i_max = 20;
  HermiteCheckSettings hermite;
  std::filesystem::path output_dir = "results";
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  bool retain_replications = false;
};

/// Parses the JSON config; unknown keys and out-of-range values raise
/// ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
FamilySpec parse_family(const nlohmann::json& doc);
nlohmann::ordered_json family_to_json(const FamilySpec& spec);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

struct MCEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int replications = 0;
  std::vector<double> values;
};

/// Mean and sample-std / sqrt(R), folded in index order.
MCEstimate estimate(std::span<const double> values, bool retain = false);

/// Seed of one (family, n) cell, derived from the master seed and the
/// cell's label so cells do not share substreams.
std::uint64_t cell_seed(std::uint64_t master_seed, const std::string& label, Index n);

inline constexpr Index kReplicationBlock = 32;

/// Per-replication statistic: (replication index, uniformized path, output row).
using ReplicationFn = std::function<void(std::uint64_t, const UniformPath&, std::span<double>)>;

/// Runs replications 0..R-1 in fixed blocks of kReplicationBlock distributed
/// over `workers` threads. Row r of the result holds replication r's
/// statistics; blocks are the same for every worker count, so results do
/// not depend on scheduling.
Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> run_replications(
    const CholeskyFactor& factor, std::uint64_t seed, int replications, int workers, int width,
    const ReplicationFn& fn);

ExperimentReport run_bound_experiment(const ExperimentConfig& config);
ExperimentReport run_convergence_study(const ExperimentConfig& config);
ExperimentReport run_tail_study(const ExperimentConfig& config, std::span<const double> thresholds);
ExperimentReport run_remark_tightness(const ExperimentConfig& config,
                                      std::span<const double> delta_targets);
ExperimentReport run_delta_diagnostics(const ExperimentConfig& config);
ExperimentReport run_hermite_check(const ExperimentConfig& config);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gaussemp
