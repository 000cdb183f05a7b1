#include "gaussemp/empirical.hpp"

#include "gaussemp/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gaussemp {

const char* to_string(SupMethod method) noexcept {
  return method == SupMethod::exact_order_statistics ? "exact_order_statistics"
                                                     : "certified_grid";
}

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// KS sup in binary128. The fluctuation bound is attained with equality, so
// the gaps are formed at this precision and rounded to double only at the
// end; double-precision gaps overshoot 1/(n+1) by an ulp.
using Quad = __float128;

Quad ecdf_sup_quad(const std::vector<double>& sorted) {
  const Quad n = static_cast<Quad>(sorted.size());
  Quad best = 0;  // n * D_n
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Quad nu = n * static_cast<Quad>(sorted[i]);
    const Quad above = static_cast<Quad>(i + 1) - nu;
    const Quad below = nu - static_cast<Quad>(i);
    if (above > best) best = above;
    if (below > best) best = below;
  }
  return best / n;
}

}  // namespace

double ecdf_eval(std::span<const double> sorted, double t) {
  if (sorted.empty()) return 0.0;
  const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
  return static_cast<double>(count) / static_cast<double>(sorted.size());
}

double ecdf_eval(const UniformPath& u, double t) { return ecdf_eval(as_span(u.sorted), t); }

DeviationResult ecdf_sup_deviation(std::span<const double> sorted) {
  DeviationResult result;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - sorted[i];
    const double below = sorted[i] - static_cast<double>(i) / n;
    const double local = std::max(above, below);
    if (local > result.sup_value) {
      result.sup_value = local;
      result.argmax_t = sorted[i];
    }
  }
  return result;
}

DeviationResult ecdf_sup_deviation(const UniformPath& u) {
  if (u.size() < 1) throw Error(Errc::invalid_parameter, "empty path");
  return ecdf_sup_deviation(as_span(u.sorted));
}

double qhat_eval(const UniformPath& u, const KernelSpec& kernel, double t) {
  const auto& s = u.sorted;
  const double e = kernel.epsilon();
  const double* begin = s.data();
  const double* end = s.data() + s.size();
  // U <= t - eps contribute 1, U >= t + eps contribute 0.
  const double* lo = std::upper_bound(begin, end, t - e);
  const double* hi = std::lower_bound(lo, end, t + e);
  double sum = static_cast<double>(lo - begin);
  for (const double* p = lo; p != hi; ++p) sum += ramp(kernel, t - *p);
  return sum / static_cast<double>(s.size());
}

DeviationResult qhat_sup_deviation(std::span<const double> sorted, const KernelSpec& kernel,
                                   double tol) {
  if (!(tol > 0.0)) throw Error(Errc::invalid_parameter, "tol must be > 0");
  if (sorted.empty()) throw Error(Errc::invalid_parameter, "empty path");
  const double e = kernel.epsilon();
  const double step = tol * e / 2.0;
  const Index points = static_cast<Index>(std::ceil((1.0 + 2.0 * e) / step)) + 1;
  const std::size_t n = sorted.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_2e2 = 1.0 / (2.0 * e * e);

  // Prefix sums of 1, U, U^2 turn each window sum of the quadratic pieces of
  // l into O(1) work; window boundaries advance monotonically with t.
  std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s1[i + 1] = s1[i] + sorted[i];
    s2[i + 1] = s2[i] + sorted[i] * sorted[i];
  }
  auto quad_sum = [&](std::size_t a, std::size_t b, double c) {
    // sum_{a <= i < b} (c + U_i)^2
    const double k = static_cast<double>(b - a);
    return k * c * c + 2.0 * c * (s1[b] - s1[a]) + (s2[b] - s2[a]);
  };

  DeviationResult result;
  result.method = SupMethod::certified_grid;
  result.certified_error = step / (2.0 * e);
  result.argmax_t = -e;
  std::size_t below = 0, middle = 0, above = 0;  // first index with U > t-eps, > t, >= t+eps
  for (Index j = 0; j < points; ++j) {
    const double t = std::min(-e + static_cast<double>(j) * step, 1.0 + e);
    while (below < n && sorted[below] <= t - e) ++below;
    while (middle < n && sorted[middle] <= t) ++middle;
    while (above < n && sorted[above] < t + e) ++above;
    // (t-eps, t]: l = 1 - (eps - t + U)^2 / (2 eps^2)
    // (t, t+eps): l = (t + eps - U)^2 / (2 eps^2)
    double sum = static_cast<double>(below);
    sum += static_cast<double>(middle - below) - quad_sum(below, middle, e - t) * inv_2e2;
    sum += quad_sum(middle, above, -(t + e)) * inv_2e2;
    const double deviation = std::abs(sum * inv_n - qhat_mean(kernel, t));
    if (deviation > result.sup_value) {
      result.sup_value = deviation;
      result.argmax_t = t;
    }
  }
  return result;
}

DeviationResult qhat_sup_deviation(const UniformPath& u, const KernelSpec& kernel, double tol) {
  return qhat_sup_deviation(as_span(u.sorted), kernel, tol);
}

FluctuationProfile fluctuation_profile(std::span<const double> path, Index first_n,
                                       Index last_n) {
  if (first_n < 1 || last_n < first_n)
    throw Error(Errc::range_exceeds_path, "range must satisfy 1 <= first_n <= last_n");
  if (last_n > static_cast<Index>(path.size()))
    throw Error(Errc::range_exceeds_path, "range end " + std::to_string(last_n) +
                                              " exceeds path length " +
                                              std::to_string(path.size()));
  FluctuationProfile profile;
  profile.first_n = first_n;
  std::vector<double> prefix(path.begin(), path.begin() + first_n);
  std::sort(prefix.begin(), prefix.end());
  Quad previous = ecdf_sup_quad(prefix);
  profile.deviations.push_back(static_cast<double>(previous));
  for (Index n = first_n + 1; n <= last_n; ++n) {
    const double u = path[static_cast<std::size_t>(n - 1)];
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), u), u);
    const Quad d = ecdf_sup_quad(prefix);
    const Quad gap = d > previous ? d - previous : previous - d;
    profile.gaps.push_back(static_cast<double>(gap));
    const double scaled = static_cast<double>(static_cast<Quad>(n) * gap);  // (m+1) gap, m = n-1
    if (scaled > profile.max_scaled_gap) {
      profile.max_scaled_gap = scaled;
      profile.argmax_n = n - 1;
    }
    profile.deviations.push_back(static_cast<double>(d));
    previous = d;
  }
  return profile;
}

}  // namespace gaussemp
