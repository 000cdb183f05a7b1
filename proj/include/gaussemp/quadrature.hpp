#pragma once

#include "gaussemp/kernel.hpp"

#include <Eigen/Core>

#include <span>
#include <string>

namespace gaussemp {

/// Nodes and weights for integrals against the standard Gaussian measure:
///   int f dmu ~= sum_i weights(i) f(nodes(i)),  sum_i weights(i) ~= 1.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  std::string description;

  Eigen::Index order() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights(i) * f(nodes(i));
    return sum;
  }
};

inline constexpr int kDefaultHermiteOrder = 128;

/// Probabilists' Gauss-Hermite rule: Golub-Welsch nodes polished by Newton
/// on the normalized recurrence, Christoffel weights 1 / sum_k h_k(x)^2.
QuadratureRule gauss_hermite(int order = kDefaultHermiteOrder);

/// Plain Gauss-Legendre nodes and weights on [-1, 1].
struct LegendreRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
LegendreRule gauss_legendre(int order);

/// Composite Gauss-Legendre in x, Gaussian density folded into the weights.
/// Panels never straddle a breakpoint; the domain is [-half_width, half_width].
QuadratureRule piecewise_gaussian_rule(std::span<const double> breakpoints, double half_width,
                                       double panel_width = 0.25, int nodes_per_panel = 20);

/// Rule for x -> g(t - Phi(x)) h_k(x) with g = l or l'. Breakpoints sit at
/// Phi^{-1}(t - eps), Phi^{-1}(t), Phi^{-1}(t + eps), where l'' jumps; the
/// domain covers the oscillation range of h_k for k <= max_degree.
QuadratureRule kernel_adapted_rule(const KernelSpec& kernel, double t, int max_degree);

/// Inverse standard normal CDF.
double normal_quantile(double p);

}  // namespace gaussemp
