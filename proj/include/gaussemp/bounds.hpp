#pragma once

#include "gaussemp/kernel.hpp"

#include <optional>

namespace gaussemp {

/// sqrt(6) + sqrt(3)
inline constexpr double kChainingConstant = 4.1815405503520555;
inline constexpr int kDefaultSimpsonIntervals = 2048;

/// D(l) = sqrt( int [ int_0^1 l'(t-y)^2 dy - (int_0^1 l'(t-y) dy)^2 ] dt ).
///
/// Inner integrals are closed form; the outer integral is composite Simpson
/// on [-eps, 1+eps] (the bracket vanishes elsewhere), split at the kinks
/// t in {-eps, 0, eps, 1-eps, 1, 1+eps}. A bracket that rounds below zero is
/// clipped; below -1e-10 that is reported on stderr.
double d_functional(const KernelSpec& kernel, int intervals = kDefaultSimpsonIntervals);

/// Same integrand over an explicit outer range, e.g. [-1, 2].
double d_functional_on(const KernelSpec& kernel, double t_lo, double t_hi,
                       int intervals = kDefaultSimpsonIntervals);

/// Variance-form bracket of D(l) at a single t.
double d_functional_integrand(const KernelSpec& kernel, double t);

inline double d_functional_upper(double epsilon) { return std::sqrt(2.0 / epsilon); }

/// (sqrt 6 + sqrt 3) D(l) sqrt((n + delta) / n^2)
double lemma1_bound(double n, double delta, double d_ell);

/// 16 ((n + delta) / n^2)^(1/3)
double theorem2_bound(double n, double delta);

/// 12 sqrt((n + delta) / (eps n^2)) + 4 eps
double combined_bound(double n, double delta, double epsilon);

enum class Regime { small_ratio, saturated };
const char* to_string(Regime regime) noexcept;

struct EpsilonChoice {
  std::optional<double> epsilon;
  Regime regime;
};

/// eps* = (9 (n + delta) / (4 n^2))^(1/3) when (n + delta)/n^2 <= 1/18.
EpsilonChoice epsilon_star(double n, double delta);

struct BoundReport {
  double n = 0;
  double delta = 0;
  double epsilon = 0;  // kernel bandwidth used for D(l) and the lemma bound
  double d_ell = 0;
  double d_ell_bound = 0;
  double lemma1_value = 0;
  double theorem2_value = 0;
  std::optional<double> epsilon_star;
  std::optional<double> raw_combined;  // combined_bound at eps*
  Regime regime = Regime::saturated;
};

/// Fills every field. The lemma bound uses the given epsilon; when none is
/// given it uses eps*, falling back to 1/2 in the saturated regime.
BoundReport make_bound_report(double n, double delta, std::optional<double> epsilon = {});

/// Bandwidth for a cell under the eps* policy.
double policy_epsilon(double n, double delta);

}  // namespace gaussemp
