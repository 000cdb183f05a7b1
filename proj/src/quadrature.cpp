#include "gaussemp/quadrature.hpp"

#include "gaussemp/error.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace gaussemp {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diagonal,
                                        const Eigen::VectorXd& off_diagonal) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off_diagonal, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw Error(Errc::invalid_parameter, "quadrature order must be >= 1");
  const Eigen::Index q = order;
  Eigen::VectorXd off(std::max<Eigen::Index>(q - 1, 0));
  for (Eigen::Index k = 0; k + 1 < q; ++k) off(k) = std::sqrt(static_cast<double>(k + 1));
  Eigen::VectorXd nodes = tridiagonal_eigenvalues(Eigen::VectorXd::Zero(q), off);

  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    double x = nodes(i);
    double norm = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // h_{q-1}, h_q at x, plus sum of squares of h_0..h_{q-1}
      double prev = 0.0, cur = 1.0;
      norm = 1.0;
      for (int k = 0; k < order; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                            std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
        if (k + 1 < order) norm += cur * cur;
      }
      const double step = cur / (std::sqrt(static_cast<double>(order)) * prev);
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    double prev = 0.0, cur = 1.0;
    norm = 1.0;
    for (int k = 0; k + 1 < order; ++k) {
      const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                          std::sqrt(static_cast<double>(k + 1));
      prev = cur;
      cur = next;
      norm += cur * cur;
    }
    rule.nodes(i) = x;
    rule.weights(i) = 1.0 / norm;
  }
  rule.description = "gauss_hermite(" + std::to_string(order) + ")";
  return rule;
}

LegendreRule gauss_legendre(int order) {
  if (order < 1) throw Error(Errc::invalid_parameter, "quadrature order must be >= 1");
  const Eigen::Index m = order;
  Eigen::VectorXd off(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index k = 1; k < m; ++k) {
    const double kd = static_cast<double>(k);
    off(k - 1) = kd / std::sqrt(4.0 * kd * kd - 1.0);
  }
  Eigen::VectorXd nodes = tridiagonal_eigenvalues(Eigen::VectorXd::Zero(m), off);
  LegendreRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double x = nodes(i);
    double derivative = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      derivative = order * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    rule.nodes(i) = x;
    rule.weights(i) = 2.0 / ((1.0 - x * x) * derivative * derivative);
  }
  return rule;
}

QuadratureRule piecewise_gaussian_rule(std::span<const double> breakpoints, double half_width,
                                       double panel_width, int nodes_per_panel) {
  if (!(half_width > 0.0) || !(panel_width > 0.0))
    throw Error(Errc::invalid_parameter, "rule extents must be positive");
  std::vector<double> cuts{-half_width, half_width};
  for (double b : breakpoints)
    if (b > -half_width && b < half_width) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const LegendreRule base = gauss_legendre(nodes_per_panel);
  std::vector<double> nodes, weights;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      for (Eigen::Index i = 0; i < base.nodes.size(); ++i) {
        const double x = lo + 0.5 * h * (base.nodes(i) + 1.0);
        nodes.push_back(x);
        weights.push_back(0.5 * h * base.weights(i) * kInvSqrt2Pi * std::exp(-0.5 * x * x));
      }
    }
  }
  QuadratureRule rule;
  rule.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  rule.weights =
      Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  rule.description = "piecewise_gauss_legendre(panels<=" + std::to_string(panel_width) +
                     ",nodes=" + std::to_string(nodes_per_panel) +
                     ",half_width=" + std::to_string(half_width) + ")";
  return rule;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::invalid_parameter, "quantile needs p in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

QuadratureRule kernel_adapted_rule(const KernelSpec& kernel, double t, int max_degree) {
  const double e = kernel.epsilon();
  std::vector<double> breakpoints;
  for (double y : {t - e, t, t + e})
    if (y > 0.0 && y < 1.0) breakpoints.push_back(normal_quantile(y));
  const double half_width =
      std::min(60.0, std::sqrt(4.0 * std::max(max_degree, 0) + 2.0) + 10.0);
  return piecewise_gaussian_rule(breakpoints, half_width);
}

}  // namespace gaussemp
