#include "gaussemp/kernel.hpp"

#include "gaussemp/error.hpp"

namespace gaussemp {

KernelSpec::KernelSpec(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw Error(Errc::invalid_parameter, "kernel epsilon must lie in (0, 1/2]");
}

double kernel_eval(const KernelSpec& kernel, double x, bool derivative) {
  return derivative ? ramp_derivative(kernel, x) : ramp(kernel, x);
}

double qhat_mean(const KernelSpec& kernel, double t) {
  return ramp_integral(kernel, t) - ramp_integral(kernel, t - 1.0);
}

double window_mean_derivative(const KernelSpec& kernel, double t) {
  return ramp(kernel, t) - ramp(kernel, t - 1.0);
}

double window_mean_derivative_sq(const KernelSpec& kernel, double t) {
  return ramp_derivative_sq_integral(kernel, t) - ramp_derivative_sq_integral(kernel, t - 1.0);
}

}  // namespace gaussemp
