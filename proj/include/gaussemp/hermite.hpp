#pragma once

#include "gaussemp/kernel.hpp"
#include "gaussemp/quadrature.hpp"

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>
#include <string>

namespace gaussemp {

inline constexpr int kMaxHermiteDegree = 500;
inline constexpr int kMaxPairDegree = 50;
inline constexpr int kDefaultAggregationDegree = 200;

/// Normalized Hermite polynomial h_k = He_k / sqrt(k!), via
///   h_{k+1}(x) = (x h_k(x) - sqrt(k) h_{k-1}(x)) / sqrt(k + 1).
template <class Scalar>
Scalar hermite(int k, Scalar x) {
  Scalar prev = 0, cur = 1;
  for (int j = 0; j < k; ++j) {
    const Scalar next = (x * cur - std::sqrt(Scalar(j)) * prev) / std::sqrt(Scalar(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

/// h_k(x); throws DegreeTooLarge above kMaxHermiteDegree.
double h_eval(int k, double x);

/// h_0(x)..h_K(x) times a common scale. Scaling by sqrt(w) of a Gaussian
/// rule keeps the product bounded for large |x|.
Eigen::VectorXd hermite_values(int max_degree, double x, double scale = 1.0);

/// E h_k(U) h_k2(V) for unit-variance (U,V) with correlation sigma, from a
/// tensor rule over V = sigma U + sqrt(1 - sigma^2) W.
double pair_expectation(double sigma, int k, int k2, const QuadratureRule& rule);

/// c_k(t) = int l(t - Phi(x)) h_k(x) dmu, or c_k'(t) with l' in place of l.
double coeff(const KernelSpec& kernel, int k, double t, const QuadratureRule& rule,
             bool derivative);
double coeff(const KernelSpec& kernel, int k, double t, bool derivative);

/// c_0(t)..c_K(t) in one pass over the rule.
Eigen::VectorXd coeffs(const KernelSpec& kernel, int max_degree, double t,
                       const QuadratureRule& rule, bool derivative);
Eigen::VectorXd coeffs(const KernelSpec& kernel, int max_degree, double t, bool derivative);

struct AggregationResidual {
  double partial_sum;  // sum_{k=1}^K c_k'(t)^2
  double target;       // int_0^1 l'(t-y)^2 dy - (int_0^1 l'(t-y) dy)^2
  double residual;     // target - partial_sum
};

AggregationResidual aggregation_residual(const KernelSpec& kernel, double t, int max_degree,
                                         const QuadratureRule& rule);
AggregationResidual aggregation_residual(const KernelSpec& kernel, double t, int max_degree);

/// Partial sums sum_{k=1}^K c_k'(t)^2 for K = 1..max_degree.
Eigen::VectorXd aggregation_partial_sums(const KernelSpec& kernel, double t, int max_degree);

struct HermiteCoefficientTable {
  KernelSpec kernel;
  Eigen::VectorXd t_grid;
  int max_degree;
  Eigen::MatrixXd c;        // rows: t, cols: k
  Eigen::MatrixXd c_prime;
  std::string quadrature;
};

HermiteCoefficientTable build_coefficient_table(const KernelSpec& kernel,
                                                const Eigen::VectorXd& t_grid, int max_degree);

/// Rows = t-grid, columns = k; header "t,k0,k1,...".
void write_coefficient_csv(std::ostream& out, const HermiteCoefficientTable& table,
                           bool derivative);

}  // namespace gaussemp
