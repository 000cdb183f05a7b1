#include "gaussemp/report.hpp"

#include "gaussemp/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gaussemp {

void ExperimentReport::add(std::string family, Index n, std::string metric, double value,
                           double parameter) {
  rows.push_back({std::move(family), n, std::move(metric), parameter, value});
}

double ExperimentReport::value(const std::string& family, Index n,
                               const std::string& metric) const {
  for (const auto& row : rows)
    if (row.family == family && row.metric == metric && (n < 0 || row.n == n)) return row.value;
  throw Error(Errc::invalid_parameter, "no row " + family + "/" + std::to_string(n) + "/" + metric);
}

std::string format_value(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error(Errc::output_write_failed, "cannot write " + path.string());
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "schema_version,experiment,family,n,metric,parameter,value\n";
  for (const auto& row : report.rows)
    out << kSchemaVersion << ',' << report.experiment << ',' << quote(row.family) << ',' << row.n
        << ',' << row.metric << ',' << format_value(row.parameter) << ','
        << format_value(row.value) << '\n';
  return out.str();
}

std::string replications_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "family,n,seed,replication,statistic,sup_value,argmax_t,method,certified_error\n";
  for (const auto& r : report.replications)
    out << quote(r.family) << ',' << r.n << ',' << r.seed << ',' << r.replication << ','
        << r.statistic << ',' << format_value(r.result.sup_value) << ','
        << format_value(r.result.argmax_t) << ',' << to_string(r.result.method) << ','
        << format_value(r.result.certified_error) << '\n';
  return out.str();
}

nlohmann::ordered_json report_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["experiment"] = report.experiment;
  doc["config"] = report.config;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"family", row.family},
                    {"n", row.n},
                    {"metric", row.metric},
                    {"parameter", number_or_null(row.parameter)},
                    {"value", number_or_null(row.value)}});
  if (!report.replications.empty()) {
    auto& reps = doc["replications"] = nlohmann::ordered_json::array();
    for (const auto& r : report.replications)
      reps.push_back({{"family", r.family},
                      {"n", r.n},
                      {"seed", r.seed},
                      {"replication", r.replication},
                      {"statistic", r.statistic},
                      {"sup_value", r.result.sup_value},
                      {"argmax_t", r.result.argmax_t},
                      {"method", to_string(r.result.method)},
                      {"certified_error", r.result.certified_error}});
  }
  doc["violations"] = report.violations;
  return doc;
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::output_write_failed, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::csv) {
    written.push_back(dir / (report.experiment + ".csv"));
    write_file(written.back(), report_csv(report));
    if (!report.replications.empty()) {
      written.push_back(dir / (report.experiment + "_replications.csv"));
      write_file(written.back(), replications_csv(report));
    }
    written.push_back(dir / (report.experiment + "_config.json"));
    write_file(written.back(), report.config.dump(2) + "\n");
  } else {
    written.push_back(dir / (report.experiment + ".json"));
    write_file(written.back(), report_json(report).dump(2) + "\n");
  }
  for (const auto& a : report.attachments) {
    written.push_back(dir / a.filename);
    write_file(written.back(), a.content);
  }
  return written;
}

}  // namespace gaussemp
