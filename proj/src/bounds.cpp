#include "gaussemp/bounds.hpp"

#include "gaussemp/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <vector>

namespace gaussemp {

namespace {

void check_n_delta(double n, double delta) {
  if (!(n >= 1.0)) throw Error(Errc::invalid_parameter, "n must be >= 1");
  if (!(delta >= 0.0)) throw Error(Errc::invalid_parameter, "delta must be >= 0");
}

double ratio(double n, double delta) { return (n + delta) / (n * n); }

}  // namespace

const char* to_string(Regime regime) noexcept {
  return regime == Regime::small_ratio ? "small_ratio" : "saturated";
}

double d_functional_integrand(const KernelSpec& kernel, double t) {
  const double mean = window_mean_derivative(kernel, t);
  return window_mean_derivative_sq(kernel, t) - mean * mean;
}

double d_functional_on(const KernelSpec& kernel, double t_lo, double t_hi, int intervals) {
  if (!(t_hi > t_lo)) throw Error(Errc::invalid_parameter, "empty integration range");
  if (intervals < 2) throw Error(Errc::invalid_parameter, "need at least 2 Simpson intervals");
  const double e = kernel.epsilon();
  std::vector<double> cuts{t_lo, t_hi};
  for (double k : {-e, 0.0, e, 1.0 - e, 1.0, 1.0 + e})
    if (k > t_lo && k < t_hi) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double worst = 0.0;
  auto bracket = [&](double t) {
    const double v = d_functional_integrand(kernel, t);
    worst = std::min(worst, v);
    return std::max(v, 0.0);
  };

  double total = 0.0;
  const double span = t_hi - t_lo;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    int m = static_cast<int>(std::ceil(intervals * (b - a) / span));
    m = std::max(2, m + (m % 2));
    const double h = (b - a) / m;
    double acc = bracket(a) + bracket(b);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * bracket(a + i * h);
    total += acc * h / 3.0;
  }
  if (worst < -1e-10)
    std::cerr << "warning: D(l) bracket clipped at " << worst << " (eps=" << e << ")\n";
  return std::sqrt(std::max(total, 0.0));
}

double d_functional(const KernelSpec& kernel, int intervals) {
  const double e = kernel.epsilon();
  return d_functional_on(kernel, -e, 1.0 + e, intervals);
}

double lemma1_bound(double n, double delta, double d_ell) {
  check_n_delta(n, delta);
  return kChainingConstant * d_ell * std::sqrt(ratio(n, delta));
}

double theorem2_bound(double n, double delta) {
  check_n_delta(n, delta);
  return 16.0 * std::cbrt(ratio(n, delta));
}

double combined_bound(double n, double delta, double epsilon) {
  check_n_delta(n, delta);
  return 12.0 * std::sqrt(ratio(n, delta) / epsilon) + 4.0 * epsilon;
}

EpsilonChoice epsilon_star(double n, double delta) {
  check_n_delta(n, delta);
  const double r = ratio(n, delta);
  if (r <= 1.0 / 18.0) return {std::cbrt(9.0 * r / 4.0), Regime::small_ratio};
  return {std::nullopt, Regime::saturated};
}

double policy_epsilon(double n, double delta) {
  return epsilon_star(n, delta).epsilon.value_or(0.5);
}

BoundReport make_bound_report(double n, double delta, std::optional<double> epsilon) {
  check_n_delta(n, delta);
  BoundReport report;
  report.n = n;
  report.delta = delta;
  const EpsilonChoice choice = epsilon_star(n, delta);
  report.regime = choice.regime;
  report.epsilon_star = choice.epsilon;
  if (choice.epsilon) report.raw_combined = combined_bound(n, delta, *choice.epsilon);
  report.epsilon = epsilon.value_or(choice.epsilon.value_or(0.5));
  const KernelSpec kernel(report.epsilon);
  report.d_ell = d_functional(kernel);
  report.d_ell_bound = d_functional_upper(report.epsilon);
  report.lemma1_value = lemma1_bound(n, delta, report.d_ell);
  report.theorem2_value = theorem2_bound(n, delta);
  return report;
}

}  // namespace gaussemp
