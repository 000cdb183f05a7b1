#include "gaussemp/bounds.hpp"
#include "gaussemp/empirical.hpp"
#include "gaussemp/harness.hpp"

#include "support/expect_error.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gaussemp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gaussemp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.families = {Iid{}, OrnsteinUhlenbeck{1.0}};
  c.n_list = {40, 400};
  c.replications = 70;  // spans a partial final block
  c.tail_thresholds = {0.1};
  return c;
}

}  // namespace

TEST(Estimate, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 4.0, 7.0};
  const MCEstimate e = estimate(v, true);
  EXPECT_DOUBLE_EQ(e.mean, 3.5);
  const double var = ((2.5 * 2.5) + (1.5 * 1.5) + (0.5 * 0.5) + (3.5 * 3.5)) / 3.0;
  EXPECT_NEAR(e.standard_error, std::sqrt(var / 4.0), 1e-15);
  EXPECT_EQ(e.replications, 4);
  EXPECT_EQ(e.values, v);
  EXPECT_TRUE(estimate(v).values.empty());
}

TEST(CellSeed, StableAndDistinct) {
  EXPECT_EQ(cell_seed(1, "iid", 100), cell_seed(1, "iid", 100));
  EXPECT_NE(cell_seed(1, "iid", 100), cell_seed(1, "iid", 101));
  EXPECT_NE(cell_seed(1, "iid", 100), cell_seed(2, "iid", 100));
  EXPECT_NE(cell_seed(1, "iid", 100), cell_seed(1, "ou(alpha=1)", 100));
}

TEST(LogLogSlope, ExactPowerLaw) {
  const std::vector<double> x{10, 100, 1000};
  const std::vector<double> y{3 * std::pow(10.0, -0.5), 3 * std::pow(100.0, -0.5),
                              3 * std::pow(1000.0, -0.5)};
  EXPECT_NEAR(loglog_slope(x, y), -0.5, 1e-14);
}

TEST(RunReplications, RowsArePureFunctionsOfIndex) {
  const auto f = factorize(build_family(LongRange{0.5, 1.0}, 30));
  auto stat = [](std::uint64_t r, const UniformPath& u, std::span<double> row) {
    row[0] = ecdf_sup_deviation(u).sup_value;
    row[1] = static_cast<double>(r);
  };
  const auto serial = run_replications(f, 17, 100, 1, 2, stat);
  const auto parallel = run_replications(f, 17, 100, 4, 2, stat);
  EXPECT_EQ(serial, parallel);
  for (Index r = 0; r < 100; ++r) EXPECT_EQ(serial(r, 1), double(r));
  // replication r is the r-th substream regardless of its block position
  const UniformPath u5 = uniformize(sample_block(f, 17, 5, 1).col(0));
  EXPECT_NEAR(serial(5, 0), ecdf_sup_deviation(u5).sup_value, 1e-12);
}

TEST(RunReplications, PropagatesExceptions) {
  const auto f = factorize(build_family(Iid{}, 5));
  auto boom = [](std::uint64_t r, const UniformPath&, std::span<double>) {
    if (r == 40) throw Error(Errc::invalid_parameter, "boom");
  };
  EXPECT_ERRC(run_replications(f, 1, 64, 3, 1, boom), Errc::invalid_parameter);
}

TEST(BoundExperiment, IidMatchesClassicalMean) {
  ExperimentConfig c;
  c.families = {Iid{}};
  c.n_list = {1000};
  c.replications = 2000;
  const ExperimentReport r = run_bound_experiment(c);
  EXPECT_NEAR(r.value("iid", 1000, "ecdf_mean"), 0.0275, 0.0004);
  EXPECT_NEAR(r.value("iid", 1000, "theorem2_bound"), 1.6, 1e-12);
  EXPECT_EQ(r.value("iid", 1000, "theorem2_pass"), 1.0);
  EXPECT_EQ(r.value("iid", 1000, "lemma1_pass"), 1.0);
  EXPECT_TRUE(r.ok());
}

TEST(BoundExperiment, OrnsteinUhlenbeckBelowBound) {
  ExperimentConfig c;
  c.families = {OrnsteinUhlenbeck{1.0}};
  c.n_list = {1000};
  c.replications = 2000;
  const ExperimentReport r = run_bound_experiment(c);
  const std::string f = "ou(alpha=1)";
  // 1163.9 is the asymptotic n * 2e^-1/(1-e^-1); the exact sum is 1162.11
  const double exact = oracle::delta_pairs([](long d) { return std::exp(-double(d)); }, 1000);
  EXPECT_NEAR(r.value(f, 1000, "delta"), exact, 1e-9 * exact);
  EXPECT_NEAR(r.value(f, 1000, "theorem2_bound"), theorem2_bound(1000, r.value(f, 1000, "delta")),
              1e-12);
  EXPECT_LT(r.value(f, 1000, "ecdf_mean"), r.value(f, 1000, "theorem2_bound"));
  EXPECT_EQ(r.value(f, 1000, "theorem2_pass"), 1.0);
}

TEST(BoundExperiment, AllIdenticalBlock) {
  ExperimentConfig c;
  c.families = {BlockIdentical{200, 0.0}};
  c.n_list = {200};
  c.replications = 2000;
  const ExperimentReport r = run_bound_experiment(c);
  const std::string f = family_label(c.families[0]);
  const double se = r.value(f, 200, "ecdf_se");
  // sup |F_n - t| = max(U, 1 - U) for a single repeated uniform
  EXPECT_NEAR(r.value(f, 200, "ecdf_mean"), 0.75, 4 * se);
  EXPECT_NEAR(r.value(f, 200, "theorem2_bound"), 16.0, 1e-12);
  EXPECT_EQ(r.value(f, 200, "theorem2_pass"), 1.0);
}

TEST(BoundExperiment, PassFlagsFollowStatedComparison) {
  const ExperimentReport r = run_bound_experiment(small_config());
  for (const std::string f : {"iid", "ou(alpha=1)"})
    for (Index n : {Index{40}, Index{400}}) {
      const bool t2 = r.value(f, n, "ecdf_mean") + 3 * r.value(f, n, "ecdf_se") <=
                      r.value(f, n, "theorem2_bound");
      EXPECT_EQ(r.value(f, n, "theorem2_pass"), t2 ? 1.0 : 0.0);
      const bool l1 = r.value(f, n, "qhat_mean") + 3 * r.value(f, n, "qhat_se") <=
                      r.value(f, n, "lemma1_bound");
      EXPECT_EQ(r.value(f, n, "lemma1_pass"), l1 ? 1.0 : 0.0);
      EXPECT_LE(r.value(f, n, "fluctuation_max_scaled_gap"), 1.0);
      EXPECT_LE(r.value(f, n, "qhat_certified_error"), 1e-3);
    }
}

TEST(BoundExperiment, RetainsReplications) {
  ExperimentConfig c = small_config();
  c.retain_replications = true;
  const ExperimentReport r = run_bound_experiment(c);
  EXPECT_EQ(r.replications.size(), 2u * 2u * 2u * 70u);
  EXPECT_EQ(r.replications.front().result.method, SupMethod::exact_order_statistics);
}

TEST(Convergence, NeedsThreePointsOverTwoDecades) {
  ExperimentConfig c = small_config();
  EXPECT_ERRC(run_convergence_study(c), Errc::config_error);
  c.n_list = {10, 20, 500};
  EXPECT_ERRC(run_convergence_study(c), Errc::config_error);
}

TEST(Convergence, IidSlopeAndOrnsteinUhlenbeckTrend) {
  ExperimentConfig c;
  c.families = {Iid{}, OrnsteinUhlenbeck{1.0}};
  c.n_list = {100, 1000, 10000};
  c.replications = 500;
  const ExperimentReport r = run_convergence_study(c);
  EXPECT_NEAR(r.value("iid", 0, "loglog_slope"), -0.5, 0.05);
  EXPECT_EQ(r.value("ou(alpha=1)", 0, "strictly_decreasing"), 1.0);
  EXPECT_EQ(r.value("iid", 0, "strictly_decreasing"), 1.0);
  EXPECT_GT(r.value("ou(alpha=1)", -1, "as_partial_sum"), 0.0);
}

TEST(Tails, OrderingAndDegenerateCases) {
  ExperimentConfig c;
  c.families = {Iid{}};
  c.n_list = {10000};
  c.replications = 200;
  const std::vector<double> half{0.5};
  const ExperimentReport r = run_tail_study(c, half);
  EXPECT_EQ(r.value("iid", 10000, "uniform_tail"), 0.0);
  EXPECT_EQ(r.value("iid", 10000, "pointwise_tail"), 0.0);
  EXPECT_TRUE(r.ok());

  c.families = {BlockIdentical{300, 0.0}};
  c.n_list = {300};
  c.replications = 4000;
  const std::vector<double> thresholds{0.4, 0.9};
  const ExperimentReport b = run_tail_study(c, thresholds);
  const std::string f = family_label(c.families[0]);
  EXPECT_EQ(b.value(f, 300, "uniform_tail"), 1.0);  // max(U,1-U) > 0.4 always
  double p = -1, se = 0;
  for (const auto& row : b.rows)
    if (row.metric == "uniform_tail" && row.parameter == 0.9) p = row.value;
    else if (row.metric == "uniform_tail_se" && row.parameter == 0.9) se = row.value;
  EXPECT_NEAR(p, 0.2, 4 * se);
  for (const auto& row : b.rows)
    if (row.metric == "ordering_holds") EXPECT_EQ(row.value, 1.0);
}

TEST(Tightness, BlockSizeAndRatioBand) {
  ExperimentConfig c;
  c.n_list = {10000};
  c.replications = 100;
  c.delta_multipliers = {1, 4, 16};
  const ExperimentReport r = run_remark_tightness(c, {});
  double m = 0;
  for (const auto& row : r.rows)
    if (row.metric == "block_size" && row.parameter == 1e4) m = row.value;
  EXPECT_EQ(m, 100.0);
  for (const auto& row : r.rows)
    if (row.metric == "delta_rel_error") EXPECT_LT(row.value, 1e-9);
  EXPECT_LE(r.value("block_identical", 10000, "ratio_band"), 3.0);
}

TEST(Tightness, FullBlockApproachesSingleUniform) {
  ExperimentConfig c;
  c.n_list = {200};
  c.replications = 1000;
  c.fixed_epsilon = 0.01;
  const std::vector<double> target{200.0 * 199.0};
  const ExperimentReport r = run_remark_tightness(c, target);
  EXPECT_EQ(r.value("block_identical", 200, "block_size"), 200.0);
  const double mean = r.value("block_identical", 200, "qhat_mean");
  const double se = r.value("block_identical", 200, "qhat_se");
  EXPECT_LT(mean, 0.75 + 4 * se);
  EXPECT_GT(mean, 0.75 - 2 * 0.01 - 4 * se);
}

TEST(Tightness, BlockTooLarge) {
  ExperimentConfig c;
  c.n_list = {50};
  c.replications = 10;
  const std::vector<double> target{1e5};
  EXPECT_ERRC(run_remark_tightness(c, target), Errc::block_exceeds_dimension);
}

TEST(Delta, Diagnostics) {
  ExperimentConfig c;
  c.families = {OrnsteinUhlenbeck{1.0}, LongRange{0.5, 0.0}};
  c.n_list = {1000000};
  const ExperimentReport r = run_delta_diagnostics(c);
  EXPECT_LT(r.value("ou(alpha=1)", 1000000, "ou_rel_error"), 0.01);
  EXPECT_LT(r.value("lrd(D=0.5)", 1000000, "lrd_rel_error"), 0.05);
}

TEST(HermiteCheck, InvariantsHold) {
  ExperimentConfig c;
  c.hermite.degrees = {20, 40};
  c.hermite.t_grid = {0.3, 0.5};
  const ExperimentReport r = run_hermite_check(c);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.attachments.size(), 4u);
  EXPECT_LT(r.value("gauss_hermite(Q=128)", 20, "orthonormality_max_error"), 1e-8);
}

TEST(Report, CsvFormatting) {
  ExperimentReport r;
  r.experiment = "demo";
  r.add("iid", 10, "x", 0.1);
  r.add("a,b", 0, "y", 1.0 / 3.0, 2.5);
  r.add("iid", 10, "z", std::nan(""));
  EXPECT_EQ(report_csv(r),
            "schema_version,experiment,family,n,metric,parameter,value\n"
            "1,demo,iid,10,x,,0.10000000000000001\n"
            "1,demo,\"a,b\",0,y,2.5,0.33333333333333331\n"
            "1,demo,iid,10,z,,\n");
  const auto j = report_json(r);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_TRUE(j["rows"][2]["value"].is_null());
  EXPECT_ERRC(r.value("iid", 11, "x"), Errc::invalid_parameter);
  EXPECT_DOUBLE_EQ(r.value("iid", -1, "x"), 0.1);
}

TEST(Report, ReproducibleAndWorkerIndependentBytes) {
  ExperimentConfig c = small_config();
  const auto d1 = scratch("a"), d2 = scratch("b"), d3 = scratch("c");
  write_report(run_bound_experiment(c), d1, OutputFormat::csv);
  write_report(run_bound_experiment(c), d2, OutputFormat::csv);
  c.workers = 3;
  write_report(run_bound_experiment(c), d3, OutputFormat::csv);
  for (const char* f : {"verify-bounds.csv", "verify-bounds_config.json"}) {
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    EXPECT_EQ(slurp(d1 / f), slurp(d3 / f)) << f;
    EXPECT_FALSE(slurp(d1 / f).empty());
  }
  c.master_seed += 1;
  c.workers = 1;
  const auto d4 = scratch("d");
  write_report(run_bound_experiment(c), d4, OutputFormat::json);
  EXPECT_TRUE(std::filesystem::exists(d4 / "verify-bounds.json"));
}

TEST(Report, UnwritableDirectory) {
  ExperimentReport r;
  r.experiment = "x";
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  EXPECT_ERRC(write_report(r, blocker / "sub", OutputFormat::csv), Errc::output_write_failed);
  std::filesystem::remove(blocker);
}

TEST(Config, ParsesFamiliesAndOptions) {
  const auto doc = nlohmann::json::parse(R"({
    "families": [{"family": "iid"}, {"family": "ou", "alpha": 0.5},
                 {"family": "lrd", "D": 0.3, "shift": 1},
                 {"family": "equicorrelated", "rho": 0.2},
                 {"family": "block_identical", "m": 4, "xi": 0.1},
                 {"family": "custom_stationary", "lags": [0.5], "tail": 0.0}],
    "n_list": [10, 20], "replications": 50, "master_seed": 18446744073709551615,
    "epsilon": 0.2, "format": "json", "workers": 2, "tail_thresholds": [0.3],
    "hermite": {"degrees": [10]}
  })");
  const ExperimentConfig c = parse_config(doc);
  ASSERT_EQ(c.families.size(), 6u);
  EXPECT_EQ(std::get<OrnsteinUhlenbeck>(c.families[1]).alpha, 0.5);
  EXPECT_EQ(std::get<LongRange>(c.families[2]).shift, 1.0);
  EXPECT_EQ(std::get<BlockIdentical>(c.families[4]).m, 4);
  EXPECT_EQ(c.master_seed, 18446744073709551615ull);
  EXPECT_EQ(*c.fixed_epsilon, 0.2);
  EXPECT_EQ(c.format, OutputFormat::json);
  EXPECT_EQ(c.hermite.degrees, std::vector<int>{10});

  const ExperimentConfig again = parse_config(nlohmann::json::parse(config_to_json(c).dump()));
  EXPECT_EQ(config_to_json(again), config_to_json(c));
}

TEST(Config, Rejections) {
  using nlohmann::json;
  EXPECT_ERRC(parse_config(json::parse(R"({"bogus": 1})")), Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"replications": 1})")), Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"n_list": []})")), Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"epsilon": 0.7})")), Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"epsilon": "auto"})")), Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"families": [{"family": "ou", "alpha": -1}]})")),
              Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"families": [{"family": "ou", "beta": 1}]})")),
              Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"families": [{"family": "fgn"}]})")),
              Errc::config_error);
  EXPECT_ERRC(parse_config(json::parse(R"({"format": "xml"})")), Errc::config_error);
  EXPECT_ERRC(load_config("/nonexistent/config.json"), Errc::config_error);
}
