#pragma once

#include <cmath>

namespace gaussemp {

/// Smooth ramp l with l'(x) = (eps - |x|)^+ / eps^2 and l(-inf) = 0.
///
/// Piecewise form:
///   l(x) = 0                         x <= -eps
///          (x + eps)^2 / (2 eps^2)   -eps <= x <= 0
///          1 - (eps - x)^2/(2 eps^2) 0 <= x <= eps
///          1                         x >= eps
/// The support of l' stays inside [-1/2, 1/2], which requires eps <= 1/2.
class KernelSpec {
 public:
  explicit KernelSpec(double epsilon);
  double epsilon() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

template <class Scalar>
Scalar ramp(const KernelSpec& k, Scalar x) {
  const Scalar e = k.epsilon();
  if (x <= -e) return Scalar(0);
  if (x >= e) return Scalar(1);
  if (x <= 0) return (x + e) * (x + e) / (2 * e * e);
  return 1 - (e - x) * (e - x) / (2 * e * e);
}

template <class Scalar>
Scalar ramp_derivative(const KernelSpec& k, Scalar x) {
  const Scalar e = k.epsilon();
  const Scalar r = e - std::abs(x);
  return r > 0 ? r / (e * e) : Scalar(0);
}

/// Antiderivative of l vanishing at -inf.
template <class Scalar>
Scalar ramp_integral(const KernelSpec& k, Scalar x) {
  const Scalar e = k.epsilon();
  if (x <= -e) return Scalar(0);
  if (x <= 0) return (x + e) * (x + e) * (x + e) / (6 * e * e);
  if (x <= e) return x + (e - x) * (e - x) * (e - x) / (6 * e * e);
  return x;
}

/// Antiderivative of (l')^2 vanishing at -inf.
template <class Scalar>
Scalar ramp_derivative_sq_integral(const KernelSpec& k, Scalar x) {
  const Scalar e = k.epsilon();
  const Scalar e4 = e * e * e * e;
  if (x <= -e) return Scalar(0);
  if (x <= 0) return (x + e) * (x + e) * (x + e) / (3 * e4);
  if (x <= e) return 2 / (3 * e) - (e - x) * (e - x) * (e - x) / (3 * e4);
  return 2 / (3 * e);
}

double kernel_eval(const KernelSpec& kernel, double x, bool derivative);

/// E Q_n(t) = int_0^1 l(t - y) dy for uniform marginals.
double qhat_mean(const KernelSpec& kernel, double t);

/// int_0^1 l'(t - y) dy.
double window_mean_derivative(const KernelSpec& kernel, double t);

/// int_0^1 (l'(t - y))^2 dy.
double window_mean_derivative_sq(const KernelSpec& kernel, double t);

}  // namespace gaussemp
