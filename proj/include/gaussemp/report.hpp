#pragma once

#include "gaussemp/covmodels.hpp"
#include "gaussemp/empirical.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace gaussemp {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { csv, json };

/// One (family, n, metric) value. Family-level summaries use n = 0;
/// `parameter` carries a threshold, target or grid point when the metric
/// needs one and is NaN otherwise.
struct ReportRow {
  std::string family;
  Index n = 0;
  std::string metric;
  double parameter = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
};

struct ReplicationRow {
  std::string family;
  Index n = 0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::string statistic;
  DeviationResult result;
};

struct Attachment {
  std::string filename;
  std::string content;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json config;
  std::vector<ReportRow> rows;
  std::vector<ReplicationRow> replications;
  std::vector<std::string> violations;
  std::vector<Attachment> attachments;

  bool ok() const noexcept { return violations.empty(); }
  void add(std::string family, Index n, std::string metric, double value,
           double parameter = std::numeric_limits<double>::quiet_NaN());
  /// First row matching family/metric (and n unless n < 0); throws if absent.
  double value(const std::string& family, Index n, const std::string& metric) const;
};

/// "%.17g"; empty for NaN.
std::string format_value(double v);

std::string report_csv(const ExperimentReport& report);
std::string replications_csv(const ExperimentReport& report);
nlohmann::ordered_json report_json(const ExperimentReport& report);

/// Writes <experiment>.csv, <experiment>_config.json (+ _replications.csv) or
/// <experiment>.json, plus attachments, into dir. Throws OutputWriteFailed.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                OutputFormat format);

}  // namespace gaussemp
