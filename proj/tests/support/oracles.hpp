#pragma once

// Reference computations for the tests. Everything here is deliberately
// naive (direct sums, dense grids, brute force) and shares no code with the
// library beyond plain Eigen types.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Sum over i != j of |C_ij| by a double loop over the full matrix.
inline double delta_dense(const Eigen::MatrixXd& c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (i != j) s += std::abs(c(i, j));
  return s;
}

/// Delta for r(d) by a double loop over index pairs.
template <class R>
double delta_pairs(R r, long n) {
  double s = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (i != j) s += std::abs(r(std::abs(i - j)));
  return s;
}

/// F_n(t) by counting.
inline double ecdf(const std::vector<double>& u, double t) {
  long c = 0;
  for (double v : u) c += v <= t;
  return static_cast<double>(c) / static_cast<double>(u.size());
}

/// sup_t |F_n(t) - clamp(t)| by evaluating just left of, at, and between
/// every jump plus a uniform grid.
inline double ks_brute(const std::vector<double>& u, int grid = 100000) {
  double best = 0.0;
  auto check = [&](double t) {
    const double ref = std::clamp(t, 0.0, 1.0);
    best = std::max(best, std::abs(ecdf(u, t) - ref));
  };
  for (double v : u) {
    check(v);
    check(std::nextafter(v, -1.0));
  }
  check(0.0);
  check(1.0);
  for (int j = 0; j <= grid; ++j) check(static_cast<double>(j) / grid);
  return best;
}

/// l'(x) = (eps - |x|)^+ / eps^2 straight from the definition.
inline double ramp_prime(double eps, double x) {
  return std::max(eps - std::abs(x), 0.0) / (eps * eps);
}

/// Composite Simpson for f on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// l(x) = int_{-inf}^x l'(s) ds by Simpson on each linear piece of l'.
inline double ramp(double eps, double x, int m = 2000) {
  if (x <= -eps) return 0.0;
  const auto f = [eps](double s) { return ramp_prime(eps, s); };
  if (x <= 0.0) return simpson(f, -eps, x, m);
  return simpson(f, -eps, 0.0, m) + simpson(f, 0.0, std::min(x, eps), m);
}

/// Closed form of l, independently transcribed for speed in large loops.
inline double ramp_fast(double eps, double x) {
  if (x <= -eps) return 0.0;
  if (x >= eps) return 1.0;
  if (x <= 0.0) return (x + eps) * (x + eps) / (2 * eps * eps);
  return 1.0 - (eps - x) * (eps - x) / (2 * eps * eps);
}

/// int_0^1 g(t - y) dy by the midpoint rule.
template <class G>
double window_mean(G g, double t, int m = 20000) {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += g(t - (i + 0.5) / m);
  return s / m;
}

/// D(l) by nested midpoint rules over t in [lo, hi] and y in [0, 1].
inline double d_functional_brute(double eps, double lo = -1.0, double hi = 2.0, int mt = 3000,
                                 int my = 3000) {
  double total = 0.0;
  const double dt = (hi - lo) / mt;
  for (int i = 0; i < mt; ++i) {
    const double t = lo + (i + 0.5) * dt;
    double m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < my; ++j) {
      const double v = ramp_prime(eps, t - (j + 0.5) / my);
      m1 += v;
      m2 += v * v;
    }
    m1 /= my;
    m2 /= my;
    total += (m2 - m1 * m1) * dt;
  }
  return std::sqrt(total);
}

/// Q_n(t) by the direct sum.
inline double qhat(const std::vector<double>& u, double eps, double t) {
  double s = 0.0;
  for (double v : u) s += ramp_fast(eps, t - v);
  return s / static_cast<double>(u.size());
}

/// E Q_n(t) for uniform marginals by midpoint integration.
inline double qhat_mean(double eps, double t) {
  return window_mean([eps](double x) { return ramp_fast(eps, x); }, t);
}

/// sup_t |Q_n(t) - E Q_n(t)| over an evenly spaced grid on [-eps, 1+eps].
inline double qhat_sup_brute(const std::vector<double>& u, double eps, double step) {
  double best = 0.0;
  const long m = static_cast<long>(std::ceil((1.0 + 2.0 * eps) / step));
  for (long j = 0; j <= m; ++j) {
    const double t = -eps + j * step;
    best = std::max(best, std::abs(qhat(u, eps, t) - qhat_mean(eps, t)));
  }
  return best;
}

/// He_k(x) / sqrt(k!) through the monic recurrence He_{k+1} = x He_k - k He_{k-1}.
inline double hermite_monic(int k, double x) {
  double prev = 0.0, cur = 1.0, fact = 1.0;
  for (int j = 0; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
    fact *= (j + 1);
  }
  return cur / std::sqrt(fact);
}

/// int g(x) phi(x) dx by composite Simpson on [-L, L].
template <class G>
double gaussian_integral(G g, double L = 12.0, int m = 200000) {
  const double h = 2.0 * L / m;
  double s = g(-L) * phi(-L) + g(L) * phi(L);
  for (int i = 1; i < m; ++i) {
    const double x = -L + i * h;
    s += (i % 2 ? 4.0 : 2.0) * g(x) * phi(x);
  }
  return s * h / 3.0;
}

/// Phi^{-1}(p) by bisection.
inline double Phi_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Phi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// c_k(t) by Simpson in x, split where t - Phi(x) crosses -eps, 0, eps.
inline double coeff(double eps, int k, double t, bool derivative) {
  const double L = 12.0;
  std::vector<double> cuts{-L, L};
  for (double y : {t - eps, t, t + eps})
    if (y > 0.0 && y < 1.0) {
      const double x = Phi_inv(y);
      if (x > -L && x < L) cuts.push_back(x);
    }
  std::sort(cuts.begin(), cuts.end());
  const auto g = [&](double x) {
    const double y = t - Phi(x);
    return (derivative ? ramp_prime(eps, y) : ramp_fast(eps, y)) * hermite_monic(k, x) * phi(x);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += simpson(g, cuts[i], cuts[i + 1], 100000);
  return total;
}

struct MeanSe {
  double mean;
  double se;
};

/// Monte Carlo E h_k(U) h_k2(V) with corr(U, V) = sigma.
inline MeanSe pair_mc(double sigma, int k, int k2, long samples, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  double s = 0.0, ss = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double a = z(gen);
    const double b = sigma * a + std::sqrt(1.0 - sigma * sigma) * z(gen);
    const double v = hermite_monic(k, a) * hermite_monic(k2, b);
    s += v;
    ss += v * v;
  }
  const double mean = s / samples;
  const double var = (ss - samples * mean * mean) / (samples - 1);
  return {mean, std::sqrt(var / samples)};
}

/// Uniform(0,1) sample from a fixed seed.
inline std::vector<double> uniform_sample(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

}  // namespace oracle
