#pragma once

#include "gaussemp/kernel.hpp"
#include "gaussemp/sampler.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace gaussemp {

enum class SupMethod { exact_order_statistics, certified_grid };

const char* to_string(SupMethod method) noexcept;

struct DeviationResult {
  double sup_value = 0.0;
  double argmax_t = 0.0;
  SupMethod method = SupMethod::exact_order_statistics;
  double certified_error = 0.0;
};

/// F_n(t) = #{U_i <= t} / n from ascending order statistics.
double ecdf_eval(std::span<const double> sorted, double t);
double ecdf_eval(const UniformPath& u, double t);

/// sup_t |F_n(t) - clamp(t,0,1)|, exact:
///   max_i max(i/n - U_(i), U_(i) - (i-1)/n).
DeviationResult ecdf_sup_deviation(std::span<const double> sorted);
DeviationResult ecdf_sup_deviation(const UniformPath& u);

/// Q_n(t) = (1/n) sum_i l(t - U_i).
double qhat_eval(const UniformPath& u, const KernelSpec& kernel, double t);

/// sup_t |Q_n(t) - E Q_n(t)| on a grid over [-eps, 1+eps] with step
/// tol * eps / 2. The deviation is (1/eps)-Lipschitz in t, so the grid max
/// is within certified_error = step / (2 eps) <= tol of the supremum.
DeviationResult qhat_sup_deviation(const UniformPath& u, const KernelSpec& kernel, double tol);
DeviationResult qhat_sup_deviation(std::span<const double> sorted, const KernelSpec& kernel,
                                   double tol);

struct FluctuationProfile {
  Index first_n = 0;
  std::vector<double> deviations;  // D_n for n = first_n..last_n
  std::vector<double> gaps;        // |D_n - D_{n+1}| for n = first_n..last_n-1
  double max_scaled_gap = 0.0;     // max_n (n+1) |D_n - D_{n+1}|
  Index argmax_n = 0;
};

/// D_n on prefixes u_1..u_n of a path, for n in [first_n, last_n].
FluctuationProfile fluctuation_profile(std::span<const double> path, Index first_n,
                                       Index last_n);

}  // namespace gaussemp
