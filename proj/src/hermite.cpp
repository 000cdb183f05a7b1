#include "gaussemp/hermite.hpp"

#include "gaussemp/error.hpp"
#include "gaussemp/sampler.hpp"

#include <cstdio>
#include <ostream>

namespace gaussemp {

namespace {

void check_degree(int k, int limit) {
  if (k < 0) throw Error(Errc::invalid_parameter, "degree must be >= 0");
  if (k > limit)
    throw Error(Errc::degree_too_large,
                "degree " + std::to_string(k) + " exceeds " + std::to_string(limit));
}

}  // namespace

double h_eval(int k, double x) {
  check_degree(k, kMaxHermiteDegree);
  return hermite(k, x);
}

Eigen::VectorXd hermite_values(int max_degree, double x, double scale) {
  check_degree(max_degree, kMaxHermiteDegree);
  Eigen::VectorXd h(max_degree + 1);
  h(0) = scale;
  if (max_degree >= 1) h(1) = x * scale;
  for (int k = 1; k < max_degree; ++k)
    h(k + 1) = (x * h(k) - std::sqrt(static_cast<double>(k)) * h(k - 1)) /
               std::sqrt(static_cast<double>(k + 1));
  return h;
}

double pair_expectation(double sigma, int k, int k2, const QuadratureRule& rule) {
  if (!(std::abs(sigma) <= 1.0)) throw Error(Errc::invalid_parameter, "|sigma| must be <= 1");
  check_degree(k, kMaxPairDegree);
  check_degree(k2, kMaxPairDegree);
  const double residual_scale = std::sqrt(std::max(0.0, 1.0 - sigma * sigma));
  double total = 0.0;
  for (Eigen::Index i = 0; i < rule.order(); ++i) {
    const double u = rule.nodes(i);
    double inner = 0.0;
    for (Eigen::Index j = 0; j < rule.order(); ++j)
      inner += rule.weights(j) * hermite(k2, sigma * u + residual_scale * rule.nodes(j));
    total += rule.weights(i) * hermite(k, u) * inner;
  }
  return total;
}

Eigen::VectorXd coeffs(const KernelSpec& kernel, int max_degree, double t,
                       const QuadratureRule& rule, bool derivative) {
  check_degree(max_degree, kMaxHermiteDegree);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(max_degree + 1);
  for (Eigen::Index i = 0; i < rule.order(); ++i) {
    const double x = rule.nodes(i);
    const double f = kernel_eval(kernel, t - normal_cdf(x), derivative);
    if (f == 0.0 || rule.weights(i) <= 0.0) continue;
    const double root = std::sqrt(rule.weights(i));
    c.noalias() += (root * f) * hermite_values(max_degree, x, root);
  }
  return c;
}

Eigen::VectorXd coeffs(const KernelSpec& kernel, int max_degree, double t, bool derivative) {
  return coeffs(kernel, max_degree, t, kernel_adapted_rule(kernel, t, max_degree), derivative);
}

double coeff(const KernelSpec& kernel, int k, double t, const QuadratureRule& rule,
             bool derivative) {
  return coeffs(kernel, k, t, rule, derivative)(k);
}

double coeff(const KernelSpec& kernel, int k, double t, bool derivative) {
  return coeffs(kernel, k, t, derivative)(k);
}

AggregationResidual aggregation_residual(const KernelSpec& kernel, double t, int max_degree,
                                         const QuadratureRule& rule) {
  if (max_degree < 1) throw Error(Errc::invalid_parameter, "K must be >= 1");
  const Eigen::VectorXd c = coeffs(kernel, max_degree, t, rule, true);
  const double partial = c.tail(max_degree).squaredNorm();
  const double mean = window_mean_derivative(kernel, t);
  const double target = window_mean_derivative_sq(kernel, t) - mean * mean;
  return {partial, target, target - partial};
}

AggregationResidual aggregation_residual(const KernelSpec& kernel, double t, int max_degree) {
  return aggregation_residual(kernel, t, max_degree,
                              kernel_adapted_rule(kernel, t, max_degree));
}

Eigen::VectorXd aggregation_partial_sums(const KernelSpec& kernel, double t, int max_degree) {
  if (max_degree < 1) throw Error(Errc::invalid_parameter, "K must be >= 1");
  const Eigen::VectorXd c = coeffs(kernel, max_degree, t, true);
  Eigen::VectorXd sums(max_degree);
  double running = 0.0;
  for (int k = 1; k <= max_degree; ++k) {
    running += c(k) * c(k);
    sums(k - 1) = running;
  }
  return sums;
}

HermiteCoefficientTable build_coefficient_table(const KernelSpec& kernel,
                                                const Eigen::VectorXd& t_grid, int max_degree) {
  check_degree(max_degree, kMaxHermiteDegree);
  HermiteCoefficientTable table{kernel, t_grid, max_degree,
                                Eigen::MatrixXd(t_grid.size(), max_degree + 1),
                                Eigen::MatrixXd(t_grid.size(), max_degree + 1), {}};
  for (Eigen::Index r = 0; r < t_grid.size(); ++r) {
    const QuadratureRule rule = kernel_adapted_rule(kernel, t_grid(r), max_degree);
    table.c.row(r) = coeffs(kernel, max_degree, t_grid(r), rule, false).transpose();
    table.c_prime.row(r) = coeffs(kernel, max_degree, t_grid(r), rule, true).transpose();
    if (r == 0) table.quadrature = "kernel-adapted " + rule.description;
  }
  return table;
}

void write_coefficient_csv(std::ostream& out, const HermiteCoefficientTable& table,
                           bool derivative) {
  const Eigen::MatrixXd& values = derivative ? table.c_prime : table.c;
  out << 't';
  for (int k = 0; k <= table.max_degree; ++k) out << ",k" << k;
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", table.t_grid(r));
    out << buf;
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", values(r, k));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::output_write_failed, "coefficient CSV write failed");
}

}  // namespace gaussemp
