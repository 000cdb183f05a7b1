#include "gaussemp/error.hpp"
#include "gaussemp/harness.hpp"

#include <fstream>
#include <set>

namespace gaussemp {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::config_error, what); }

void reject_unknown(const json& doc, std::initializer_list<const char*> known,
                    const std::string& where) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

double require_number(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    config_error(where + " requires numeric '" + key + "'");
  return doc.at(key).get<double>();
}

}  // namespace

FamilySpec parse_family(const json& doc) {
  if (!doc.is_object() || !doc.contains("family") || !doc.at("family").is_string())
    config_error("family entries need a string 'family' field");
  const std::string name = doc.at("family").get<std::string>();
  FamilySpec spec;
  if (name == "iid") {
    reject_unknown(doc, {"family"}, name);
    spec = Iid{};
  } else if (name == "ou") {
    reject_unknown(doc, {"family", "alpha"}, name);
    spec = OrnsteinUhlenbeck{require_number(doc, "alpha", name)};
  } else if (name == "lrd") {
    reject_unknown(doc, {"family", "D", "shift"}, name);
    spec = LongRange{require_number(doc, "D", name), get_or(doc, "shift", 0.0)};
  } else if (name == "equicorrelated") {
    reject_unknown(doc, {"family", "rho"}, name);
    spec = Equicorrelated{require_number(doc, "rho", name)};
  } else if (name == "block_identical") {
    reject_unknown(doc, {"family", "m", "xi"}, name);
    spec = BlockIdentical{static_cast<Index>(require_number(doc, "m", name)),
                          require_number(doc, "xi", name)};
  } else if (name == "custom_stationary") {
    reject_unknown(doc, {"family", "lags", "tail"}, name);
    spec = CustomStationary{get_or(doc, "lags", std::vector<double>{}), get_or(doc, "tail", 0.0)};
  } else if (name == "power_log") {
    reject_unknown(doc, {"family", "a", "b"}, name);
    spec = PowerLogGrowth{get_or(doc, "a", 2.0), get_or(doc, "b", 4.0)};
  } else {
    config_error("unknown family '" + name + "'");
  }
  try {
    validate_family(spec);
  } catch (const Error& e) {
    config_error(e.what());
  }
  return spec;
}

nlohmann::ordered_json family_to_json(const FamilySpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = family_name(spec);
  if (const auto* f = std::get_if<OrnsteinUhlenbeck>(&spec)) j["alpha"] = f->alpha;
  if (const auto* f = std::get_if<LongRange>(&spec)) {
    j["D"] = f->d_exponent;
    j["shift"] = f->shift;
  }
  if (const auto* f = std::get_if<Equicorrelated>(&spec)) j["rho"] = f->rho;
  if (const auto* f = std::get_if<BlockIdentical>(&spec)) {
    j["m"] = f->m;
    j["xi"] = f->xi;
  }
  if (const auto* f = std::get_if<CustomStationary>(&spec)) {
    j["lags"] = f->lags;
    j["tail"] = f->tail;
  }
  if (const auto* f = std::get_if<PowerLogGrowth>(&spec)) {
    j["a"] = f->power;
    j["b"] = f->log_exponent;
  }
  return j;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  reject_unknown(doc,
                 {"schema_version", "families", "n_list", "replications", "master_seed",
                  "epsilon", "tol", "tail_thresholds", "pointwise_grid", "delta_targets",
                  "delta_multipliers", "gamma", "i_max", "hermite", "output_dir", "format",
                  "workers", "retain_replications"},
                 "config");
  if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion)
    config_error("unsupported schema_version");

  ExperimentConfig c;
  if (doc.contains("families")) {
    if (!doc.at("families").is_array()) config_error("'families' must be an array");
    for (const auto& f : doc.at("families")) c.families.push_back(parse_family(f));
  }
  c.n_list = get_or(doc, "n_list", c.n_list);
  c.replications = get_or(doc, "replications", c.replications);
  c.master_seed = get_or(doc, "master_seed", c.master_seed);
  if (doc.contains("epsilon")) {
    const auto& e = doc.at("epsilon");
    if (e.is_string() && e.get<std::string>() == "epsilon_star")
      c.fixed_epsilon.reset();
    else if (e.is_number())
      c.fixed_epsilon = e.get<double>();
    else
      config_error("'epsilon' must be a number or \"epsilon_star\"");
  }
  c.tol = get_or(doc, "tol", c.tol);
  c.tail_thresholds = get_or(doc, "tail_thresholds", c.tail_thresholds);
  c.pointwise_grid = get_or(doc, "pointwise_grid", c.pointwise_grid);
  c.delta_targets = get_or(doc, "delta_targets", c.delta_targets);
  c.delta_multipliers = get_or(doc, "delta_multipliers", c.delta_multipliers);
  c.gamma = get_or(doc, "gamma", c.gamma);
  c.i_max = get_or(doc, "i_max", c.i_max);
  if (doc.contains("hermite")) {
    const auto& h = doc.at("hermite");
    reject_unknown(h,
                   {"epsilons", "t_grid", "degrees", "sigmas", "quadrature_order",
                    "max_pair_degree", "max_orthonormal_degree", "relative_tolerance"},
                   "hermite");
    auto& s = c.hermite;
    s.epsilons = get_or(h, "epsilons", s.epsilons);
    s.t_grid = get_or(h, "t_grid", s.t_grid);
    s.degrees = get_or(h, "degrees", s.degrees);
    s.sigmas = get_or(h, "sigmas", s.sigmas);
    s.quadrature_order = get_or(h, "quadrature_order", s.quadrature_order);
    s.max_pair_degree = get_or(h, "max_pair_degree", s.max_pair_degree);
    s.max_orthonormal_degree = get_or(h, "max_orthonormal_degree", s.max_orthonormal_degree);
    s.relative_tolerance = get_or(h, "relative_tolerance", s.relative_tolerance);
  }
  c.output_dir = get_or(doc, "output_dir", c.output_dir.string());
  if (doc.contains("format")) {
    const std::string f = get_or(doc, "format", std::string("csv"));
    if (f == "csv")
      c.format = OutputFormat::csv;
    else if (f == "json")
      c.format = OutputFormat::json;
    else
      config_error("format must be csv or json");
  }
  c.workers = get_or(doc, "workers", c.workers);
  c.retain_replications = get_or(doc, "retain_replications", c.retain_replications);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    config_error("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate_config(const ExperimentConfig& c) {
  if (c.replications < 2) config_error("replications must be >= 2");
  if (c.n_list.empty()) config_error("n_list must be nonempty");
  for (Index n : c.n_list)
    if (n < 1) config_error("n_list entries must be >= 1");
  if (c.fixed_epsilon && !(*c.fixed_epsilon > 0.0 && *c.fixed_epsilon <= 0.5))
    config_error("epsilon must lie in (0, 1/2]");
  if (!(c.tol > 0.0)) config_error("tol must be > 0");
  for (double t : c.tail_thresholds)
    if (!(t > 0.0 && t < 1.0)) config_error("tail thresholds must lie in (0,1)");
  if (c.pointwise_grid < 1) config_error("pointwise_grid must be >= 1");
  for (double d : c.delta_targets)
    if (!(d >= 0.0)) config_error("delta targets must be >= 0");
  for (double d : c.delta_multipliers)
    if (!(d >= 0.0)) config_error("delta multipliers must be >= 0");
  if (!(c.gamma > 1.0)) config_error("gamma must be > 1");
  if (c.i_max < 1) config_error("i_max must be >= 1");
  if (c.workers < 1) config_error("workers must be >= 1");
  for (double e : c.hermite.epsilons)
    if (!(e > 0.0 && e <= 0.5)) config_error("hermite epsilons must lie in (0, 1/2]");
  for (int k : c.hermite.degrees)
    if (k < 1 || k > 500) config_error("hermite degrees must lie in [1, 500]");
  if (c.hermite.quadrature_order < 2) config_error("quadrature_order must be >= 2");
  if (c.hermite.max_pair_degree < 0 || c.hermite.max_pair_degree > 50)
    config_error("max_pair_degree must lie in [0, 50]");
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  auto& fams = j["families"] = nlohmann::ordered_json::array();
  for (const auto& f : c.families) fams.push_back(family_to_json(f));
  j["n_list"] = c.n_list;
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  if (c.fixed_epsilon)
    j["epsilon"] = *c.fixed_epsilon;
  else
    j["epsilon"] = "epsilon_star";
  j["tol"] = c.tol;
  j["tail_thresholds"] = c.tail_thresholds;
  j["pointwise_grid"] = c.pointwise_grid;
  j["delta_targets"] = c.delta_targets;
  j["delta_multipliers"] = c.delta_multipliers;
  j["gamma"] = c.gamma;
  j["i_max"] = c.i_max;
  j["hermite"] = {{"epsilons", c.hermite.epsilons},
                  {"t_grid", c.hermite.t_grid},
                  {"degrees", c.hermite.degrees},
                  {"sigmas", c.hermite.sigmas},
                  {"quadrature_order", c.hermite.quadrature_order},
                  {"max_pair_degree", c.hermite.max_pair_degree},
                  {"max_orthonormal_degree", c.hermite.max_orthonormal_degree},
                  {"relative_tolerance", c.hermite.relative_tolerance}};
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  j["retain_replications"] = c.retain_replications;
  // output_dir and workers are deliberately not echoed: they must not change
  // report bytes.
  return j;
}

}  // namespace gaussemp
