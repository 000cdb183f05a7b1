#include "gaussemp/harness.hpp"

#include "gaussemp/bounds.hpp"
#include "gaussemp/empirical.hpp"
#include "gaussemp/error.hpp"
#include "gaussemp/hermite.hpp"
#include "gaussemp/philox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace gaussemp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

MCEstimate column_estimate(const RowMatrix& m, Index col, bool retain) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Index r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(r)] = m(r, col);
  return estimate(v, retain);
}

double column_max(const RowMatrix& m, Index col) {
  double best = 0.0;
  for (Index r = 0; r < m.rows(); ++r) best = std::max(best, m(r, col));
  return best;
}

/// Fraction of replications with m(r, col) > threshold, and its binomial SE.
std::pair<double, double> exceedance(const RowMatrix& m, Index col, double threshold) {
  Index hits = 0;
  for (Index r = 0; r < m.rows(); ++r) hits += m(r, col) > threshold;
  const double R = static_cast<double>(m.rows());
  const double p = static_cast<double>(hits) / R;
  return {p, std::sqrt(p * (1.0 - p) / R)};
}

ExperimentReport new_report(const char* name, const ExperimentConfig& config) {
  ExperimentReport report;
  report.experiment = name;
  report.config = config_to_json(config);
  return report;
}

void require_families(const ExperimentConfig& config) {
  if (config.families.empty()) throw Error(Errc::config_error, "no families configured");
}

void retain(ExperimentReport& report, const ExperimentConfig& config, const std::string& label,
            Index n, std::uint64_t seed, const RowMatrix& stats, Index sup_col,
            const char* statistic, SupMethod method, Index cert_col = -1) {
  if (!config.retain_replications) return;
  for (Index r = 0; r < stats.rows(); ++r) {
    DeviationResult d;
    d.sup_value = stats(r, sup_col);
    d.argmax_t = stats(r, sup_col + 1);
    d.method = method;
    d.certified_error = cert_col >= 0 ? stats(r, cert_col) : 0.0;
    report.replications.push_back(
        {label, n, seed, static_cast<std::uint64_t>(r), statistic, d});
  }
}

struct Cell {
  CovarianceModel model;
  CholeskyFactor factor;
  std::uint64_t seed;
};

Cell make_cell(const ExperimentConfig& config, const FamilySpec& spec, Index n,
               const std::string& label) {
  CovarianceModel model = build_family(spec, n);
  CholeskyFactor factor = factorize(model);
  return {std::move(model), std::move(factor), cell_seed(config.master_seed, label, n)};
}

}  // namespace

MCEstimate estimate(std::span<const double> values, bool retain_values) {
  MCEstimate e;
  e.replications = static_cast<int>(values.size());
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    e.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  if (retain_values) e.values.assign(values.begin(), values.end());
  return e;
}

std::uint64_t cell_seed(std::uint64_t master_seed, const std::string& label, Index n) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix_seed(master_seed, h ^ static_cast<std::uint64_t>(n));
}

RowMatrix run_replications(const CholeskyFactor& factor, std::uint64_t seed, int replications,
                           int workers, int width, const ReplicationFn& fn) {
  if (replications < 1) throw Error(Errc::invalid_parameter, "replications must be >= 1");
  if (width < 1) throw Error(Errc::invalid_parameter, "width must be >= 1");
  RowMatrix out(replications, width);
  const Index blocks = (replications + kReplicationBlock - 1) / kReplicationBlock;
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const Index b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const Index first = b * kReplicationBlock;
        const Index count = std::min<Index>(kReplicationBlock, replications - first);
        const Eigen::MatrixXd x =
            sample_block(factor, seed, static_cast<std::uint64_t>(first), count);
        for (Index c = 0; c < count; ++c) {
          const UniformPath u = uniformize(x.col(c));
          const Index r = first + c;
          fn(static_cast<std::uint64_t>(r), u,
             std::span<double>(out.row(r).data(), static_cast<std::size_t>(width)));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const int threads = static_cast<int>(std::min<Index>(std::max(workers, 1), blocks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::invalid_parameter, "slope needs two or more matching points");
  double mx = 0.0, my = 0.0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw Error(Errc::invalid_parameter, "log-log slope needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(Errc::invalid_parameter, "log-log slope needs distinct x");
  return sxy / sxx;
}

ExperimentReport run_bound_experiment(const ExperimentConfig& config) {
  validate_config(config);
  require_families(config);
  ExperimentReport report = new_report("verify-bounds", config);

  for (const FamilySpec& spec : config.families) {
    const std::string label = family_label(spec);
    for (Index n : config.n_list) {
      const Cell cell = make_cell(config, spec, n, label);
      const double delta = cell.model.delta();
      const double nd = static_cast<double>(n);
      const BoundReport bounds = make_bound_report(nd, delta, config.fixed_epsilon);
      const KernelSpec kernel(bounds.epsilon);
      const double tol = config.tol;

      // columns: ecdf sup, argmax, qhat sup, argmax, certified error
      const RowMatrix stats = run_replications(
          cell.factor, cell.seed, config.replications, config.workers, 5,
          [&](std::uint64_t, const UniformPath& u, std::span<double> row) {
            const DeviationResult e = ecdf_sup_deviation(u);
            const DeviationResult q = qhat_sup_deviation(u, kernel, tol);
            row[0] = e.sup_value;
            row[1] = e.argmax_t;
            row[2] = q.sup_value;
            row[3] = q.argmax_t;
            row[4] = q.certified_error;
          });
      const MCEstimate ecdf = column_estimate(stats, 0, false);
      const MCEstimate qhat = column_estimate(stats, 2, false);
      const bool theorem2_pass = ecdf.mean + 3.0 * ecdf.standard_error <= bounds.theorem2_value;
      const bool lemma1_pass = qhat.mean + 3.0 * qhat.standard_error <= bounds.lemma1_value;

      report.add(label, n, "delta", delta);
      report.add(label, n, "epsilon", bounds.epsilon);
      report.add(label, n, "epsilon_star", bounds.epsilon_star.value_or(kNaN));
      report.add(label, n, "saturated", bounds.regime == Regime::saturated ? 1.0 : 0.0);
      report.add(label, n, "d_ell", bounds.d_ell);
      report.add(label, n, "d_ell_bound", bounds.d_ell_bound);
      report.add(label, n, "lemma1_bound", bounds.lemma1_value);
      report.add(label, n, "theorem2_bound", bounds.theorem2_value);
      report.add(label, n, "raw_combined", bounds.raw_combined.value_or(kNaN));
      report.add(label, n, "ecdf_mean", ecdf.mean);
      report.add(label, n, "ecdf_se", ecdf.standard_error);
      report.add(label, n, "theorem2_ratio", ecdf.mean / bounds.theorem2_value);
      report.add(label, n, "theorem2_pass", theorem2_pass ? 1.0 : 0.0);
      report.add(label, n, "qhat_mean", qhat.mean);
      report.add(label, n, "qhat_se", qhat.standard_error);
      report.add(label, n, "qhat_certified_error", column_max(stats, 4));
      report.add(label, n, "lemma1_ratio", qhat.mean / bounds.lemma1_value);
      report.add(label, n, "lemma1_pass", lemma1_pass ? 1.0 : 0.0);
      for (double threshold : config.tail_thresholds) {
        const auto [p, se] = exceedance(stats, 0, threshold);
        report.add(label, n, "uniform_tail", p, threshold);
        report.add(label, n, "uniform_tail_se", se, threshold);
      }
      if (n >= 2) {
        const GaussianPath path = sample_path(cell.factor, cell.seed, 0, label);
        const UniformPath u = uniformize(path);
        const FluctuationProfile profile = fluctuation_profile(
            std::span<const double>(u.values.data(), static_cast<std::size_t>(n)), 1, n);
        report.add(label, n, "fluctuation_max_scaled_gap", profile.max_scaled_gap);
        if (profile.max_scaled_gap > 1.0)
          report.violations.push_back(label + " n=" + std::to_string(n) +
                                      ": fluctuation gap exceeds 1/(n+1)");
      }
      report.add(label, n, "jitter", cell.factor.jitter_used());

      retain(report, config, label, n, cell.seed, stats, 0, "ecdf",
             SupMethod::exact_order_statistics);
      retain(report, config, label, n, cell.seed, stats, 2, "qhat", SupMethod::certified_grid, 4);

      if (config.replications >= 500) {
        if (!theorem2_pass)
          report.violations.push_back(label + " n=" + std::to_string(n) +
                                      ": ecdf estimate + 3 SE exceeds the 16 cbrt bound");
        if (!lemma1_pass)
          report.violations.push_back(label + " n=" + std::to_string(n) +
                                      ": qhat estimate + 3 SE exceeds the chaining bound");
      }
    }
  }
  return report;
}

ExperimentReport run_convergence_study(const ExperimentConfig& config) {
  validate_config(config);
  require_families(config);
  std::vector<Index> ns = config.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.size() < 3 || static_cast<double>(ns.back()) < 100.0 * static_cast<double>(ns.front()))
    throw Error(Errc::config_error,
                "convergence study needs >= 3 distinct n spanning >= 2 decades");

  ExperimentReport report = new_report("convergence", config);
  for (const FamilySpec& spec : config.families) {
    const std::string label = family_label(spec);
    std::vector<double> xs, means;
    for (Index n : ns) {
      const Cell cell = make_cell(config, spec, n, label);
      const RowMatrix stats = run_replications(
          cell.factor, cell.seed, config.replications, config.workers, 2,
          [](std::uint64_t, const UniformPath& u, std::span<double> row) {
            const DeviationResult e = ecdf_sup_deviation(u);
            row[0] = e.sup_value;
            row[1] = e.argmax_t;
          });
      const MCEstimate ecdf = column_estimate(stats, 0, false);
      report.add(label, n, "delta", cell.model.delta());
      report.add(label, n, "ecdf_mean", ecdf.mean);
      report.add(label, n, "ecdf_se", ecdf.standard_error);
      retain(report, config, label, n, cell.seed, stats, 0, "ecdf",
             SupMethod::exact_order_statistics);
      xs.push_back(static_cast<double>(n));
      means.push_back(ecdf.mean);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < means.size(); ++i) decreasing &= means[i] < means[i - 1];
    report.add(label, 0, "loglog_slope", loglog_slope(xs, means));
    report.add(label, 0, "strictly_decreasing", decreasing ? 1.0 : 0.0);
    // Block families are defined only for n >= m, so their growth has no
    // a.s. series.
    if (!std::holds_alternative<BlockIdentical>(spec)) {
      for (const PartialSumPoint& p : as_condition_partial_sums(spec, config.gamma, config.i_max)) {
        report.add(label, p.n, "as_increment", p.increment, p.i);
        report.add(label, p.n, "as_partial_sum", p.partial_sum, p.i);
      }
    }
  }
  return report;
}

ExperimentReport run_tail_study(const ExperimentConfig& config,
                                std::span<const double> thresholds) {
  validate_config(config);
  require_families(config);
  if (thresholds.empty()) throw Error(Errc::config_error, "tail study needs a threshold");
  for (double t : thresholds)
    if (!(t > 0.0 && t < 1.0)) throw Error(Errc::config_error, "tail thresholds must lie in (0,1)");

  ExperimentReport report = new_report("tails", config);
  report.config["tail_thresholds"] = std::vector<double>(thresholds.begin(), thresholds.end());
  report.config["diagnostic"] = "directional consistency only";

  const int grid = config.pointwise_grid;
  std::vector<double> t_grid(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) t_grid[static_cast<std::size_t>(j)] = (j + 0.5) / grid;

  for (const FamilySpec& spec : config.families) {
    const std::string label = family_label(spec);
    for (Index n : config.n_list) {
      const Cell cell = make_cell(config, spec, n, label);
      // columns: ecdf sup, argmax, then |F_n(t_j) - t_j| per grid point
      const RowMatrix stats = run_replications(
          cell.factor, cell.seed, config.replications, config.workers, 2 + grid,
          [&](std::uint64_t, const UniformPath& u, std::span<double> row) {
            const DeviationResult e = ecdf_sup_deviation(u);
            row[0] = e.sup_value;
            row[1] = e.argmax_t;
            const double* s = u.sorted.data();
            const Index size = u.size();
            Index below = 0;
            for (int j = 0; j < grid; ++j) {
              const double t = t_grid[static_cast<std::size_t>(j)];
              while (below < size && s[below] <= t) ++below;
              row[static_cast<std::size_t>(2 + j)] =
                  std::abs(static_cast<double>(below) / static_cast<double>(size) - t);
            }
          });
      report.add(label, n, "ecdf_mean", column_estimate(stats, 0, false).mean);
      for (double threshold : thresholds) {
        const auto [uniform, uniform_se] = exceedance(stats, 0, threshold);
        double pointwise = -1.0, pointwise_se = 0.0, argmax_t = 0.0;
        for (int j = 0; j < grid; ++j) {
          const auto [p, se] = exceedance(stats, 2 + j, threshold);
          if (p > pointwise) {
            pointwise = p;
            pointwise_se = se;
            argmax_t = t_grid[static_cast<std::size_t>(j)];
          }
        }
        const bool ordered = pointwise <= uniform + 2.0 * uniform_se;
        report.add(label, n, "uniform_tail", uniform, threshold);
        report.add(label, n, "uniform_tail_se", uniform_se, threshold);
        report.add(label, n, "pointwise_tail", pointwise, threshold);
        report.add(label, n, "pointwise_tail_se", pointwise_se, threshold);
        report.add(label, n, "pointwise_argmax_t", argmax_t, threshold);
        report.add(label, n, "ordering_holds", ordered ? 1.0 : 0.0, threshold);
        if (!ordered)
          report.violations.push_back(label + " n=" + std::to_string(n) + " threshold=" +
                                      short_number(threshold) +
                                      ": pointwise tail exceeds uniform tail + 2 SE");
      }
      retain(report, config, label, n, cell.seed, stats, 0, "ecdf",
             SupMethod::exact_order_statistics);
    }
  }
  return report;
}

ExperimentReport run_remark_tightness(const ExperimentConfig& config,
                                      std::span<const double> delta_targets) {
  validate_config(config);
  ExperimentReport report = new_report("tightness", config);
  report.config["delta_targets"] = std::vector<double>(delta_targets.begin(), delta_targets.end());

  for (Index n : config.n_list) {
    const double nd = static_cast<double>(n);
    std::vector<double> targets(delta_targets.begin(), delta_targets.end());
    for (double k : config.delta_multipliers) targets.push_back(k * nd);
    if (targets.empty()) throw Error(Errc::config_error, "no delta targets for the tightness study");

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double target : targets) {
      const BlockIdentical block = block_for_delta(n, target);
      const FamilySpec spec = block;
      const std::string seed_label = "tightness(delta=" + short_number(target) + ")";
      const Cell cell = make_cell(config, spec, n, seed_label);
      const double achieved = cell.model.delta();
      const double epsilon =
          config.fixed_epsilon ? *config.fixed_epsilon : policy_epsilon(nd, achieved);
      const KernelSpec kernel(epsilon);
      const double tol = config.tol;
      const RowMatrix stats = run_replications(
          cell.factor, cell.seed, config.replications, config.workers, 3,
          [&](std::uint64_t, const UniformPath& u, std::span<double> row) {
            const DeviationResult q = qhat_sup_deviation(u, kernel, tol);
            row[0] = q.sup_value;
            row[1] = q.argmax_t;
            row[2] = q.certified_error;
          });
      const MCEstimate qhat = column_estimate(stats, 0, false);
      const double ratio = target > 0.0 ? qhat.mean * nd / std::sqrt(achieved) : kNaN;
      const std::string label = "block_identical";
      report.add(label, n, "block_size", static_cast<double>(block.m), target);
      report.add(label, n, "xi", block.xi, target);
      report.add(label, n, "achieved_delta", achieved, target);
      report.add(label, n, "delta_rel_error",
                 target > 0.0 ? std::abs(achieved - target) / target : achieved, target);
      report.add(label, n, "epsilon", epsilon, target);
      report.add(label, n, "qhat_mean", qhat.mean, target);
      report.add(label, n, "qhat_se", qhat.standard_error, target);
      report.add(label, n, "ratio", ratio, target);
      if (std::isfinite(ratio)) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      retain(report, config, seed_label, n, cell.seed, stats, 0, "qhat", SupMethod::certified_grid,
             2);
    }
    if (hi > 0.0) report.add("block_identical", n, "ratio_band", hi / lo);
  }
  return report;
}

ExperimentReport run_delta_diagnostics(const ExperimentConfig& config) {
  validate_config(config);
  require_families(config);
  ExperimentReport report = new_report("delta", config);
  std::vector<Index> ns = config.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  for (const FamilySpec& spec : config.families) {
    const std::string label = family_label(spec);
    for (const GrowthPoint& g : growth_diagnostics(spec, ns)) {
      const double nd = static_cast<double>(g.n);
      report.add(label, g.n, "delta", g.delta);
      report.add(label, g.n, "delta_over_n2", g.ratio);
      report.add(label, g.n, "delta_over_n", g.delta / nd);
      if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&spec)) {
        const double phi = std::exp(-ou->alpha);
        const double limit = 2.0 * phi / (1.0 - phi);
        report.add(label, g.n, "ou_limit", limit);
        report.add(label, g.n, "ou_rel_error", std::abs(g.delta / nd - limit) / limit);
      }
      if (const auto* lrd = std::get_if<LongRange>(&spec)) {
        const double d = lrd->d_exponent;
        const double limit = 2.0 / ((1.0 - d) * (2.0 - d));
        const double rate = g.delta / std::pow(nd, 2.0 - d);
        report.add(label, g.n, "lrd_rate_ratio", rate);
        report.add(label, g.n, "lrd_limit", limit);
        report.add(label, g.n, "lrd_rel_error", std::abs(rate - limit) / limit);
      }
    }
    if (!std::holds_alternative<BlockIdentical>(spec)) {
      for (const PartialSumPoint& p : as_condition_partial_sums(spec, config.gamma, config.i_max)) {
        report.add(label, p.n, "as_increment", p.increment, p.i);
        report.add(label, p.n, "as_partial_sum", p.partial_sum, p.i);
      }
    }
  }
  return report;
}

ExperimentReport run_hermite_check(const ExperimentConfig& config) {
  const HermiteCheckSettings& h = config.hermite;
  ExperimentReport report = new_report("hermite-check", config);
  const QuadratureRule rule = gauss_hermite(h.quadrature_order);
  const std::string rule_label = "gauss_hermite(Q=" + std::to_string(h.quadrature_order) + ")";

  double ortho = 0.0;
  for (int j = 0; j <= h.max_orthonormal_degree; ++j)
    for (int k = 0; k <= h.max_orthonormal_degree; ++k) {
      const double v = rule.integrate([&](double x) { return h_eval(j, x) * h_eval(k, x); });
      ortho = std::max(ortho, std::abs(v - (j == k ? 1.0 : 0.0)));
    }
  report.add(rule_label, h.max_orthonormal_degree, "orthonormality_max_error", ortho);
  if (ortho > 1e-8) report.violations.push_back("orthonormality error above 1e-8");

  for (double sigma : h.sigmas) {
    double worst = 0.0;
    bool within = true;
    for (int k = 0; k <= h.max_pair_degree; ++k)
      for (int k2 = 0; k2 <= h.max_pair_degree; ++k2) {
        const double expected = k == k2 ? std::pow(sigma, k) : 0.0;
        const double err = std::abs(pair_expectation(sigma, k, k2, rule) - expected);
        worst = std::max(worst, err);
        within &= err <= std::max(1e-8, 1e-6 * std::pow(std::abs(sigma), k));
      }
    report.add(rule_label, h.max_pair_degree, "pair_max_error", worst, sigma);
    if (!within)
      report.violations.push_back("pair expectation off sigma^k delta at sigma=" +
                                  short_number(sigma));
  }

  for (double eps : h.epsilons) {
    const KernelSpec kernel(eps);
    const std::string label = "kernel(eps=" + short_number(eps) + ")";
    const double d = d_functional(kernel);
    report.add(label, 0, "d_ell", d);
    report.add(label, 0, "d_ell_bound", d_functional_upper(eps));
    if (d > d_functional_upper(eps) + 1e-8)
      report.violations.push_back(label + ": D(l) exceeds sqrt(2/eps)");

    const int k_max = h.degrees.empty() ? 0 : *std::max_element(h.degrees.begin(), h.degrees.end());
    if (k_max == 0) continue;
    for (double t : h.t_grid) {
      const Eigen::VectorXd sums = aggregation_partial_sums(kernel, t, k_max);
      const double m1 = window_mean_derivative(kernel, t);
      const double target = window_mean_derivative_sq(kernel, t) - m1 * m1;
      for (Index k = 1; k < sums.size(); ++k)
        if (sums(k) < sums(k - 1))
          report.violations.push_back(label + ": partial sums not monotone at t=" + short_number(t));
      for (int k : h.degrees) {
        const double s = sums(k - 1);
        const double rel = (target - s) / target;
        report.add(label, k, "aggregation_partial_sum", s, t);
        report.add(label, k, "aggregation_target", target, t);
        report.add(label, k, "aggregation_rel_residual", rel, t);
        report.add(label, k, "aggregation_within_tol", std::abs(rel) <= h.relative_tolerance, t);
        if (s > target * (1.0 + 1e-9) + 1e-12)
          report.violations.push_back(label + ": partial sum overshoots the target at t=" +
                                      short_number(t) + " K=" + std::to_string(k));
      }
    }

    const Eigen::VectorXd t_grid =
        Eigen::Map<const Eigen::VectorXd>(h.t_grid.data(), static_cast<Index>(h.t_grid.size()));
    const HermiteCoefficientTable table = build_coefficient_table(kernel, t_grid, k_max);
    for (bool derivative : {false, true}) {
      std::ostringstream out;
      write_coefficient_csv(out, table, derivative);
      report.attachments.push_back({std::string(derivative ? "hermite_cprime" : "hermite_c") +
                                        "_eps" + short_number(eps) + ".csv",
                                    out.str()});
    }
  }
  return report;
}

}  // namespace gaussemp
