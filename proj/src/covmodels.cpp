#include "gaussemp/covmodels.hpp"

#include "gaussemp/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace gaussemp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr Index kLinearBudget = Index{1} << 31;
constexpr Index kDirectSumLimit = 1 << 20;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::invalid_parameter, what); }

// Levinson-Durbin on lags r_0..r_{n-1}. Returns the first step whose
// prediction error variance drops below the threshold, or n when the
// Toeplitz matrix is positive definite.
Index levinson_breakdown(const Eigen::VectorXd& r) {
  const Index n = r.size();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
  double v = r(0);
  for (Index k = 1; k < n; ++k) {
    double acc = r(k);
    for (Index j = 1; j < k; ++j) acc -= a(j) * r(k - j);
    const double kappa = acc / v;
    prev.head(k) = a.head(k);
    a(k) = kappa;
    for (Index j = 1; j < k; ++j) a(j) = prev(j) - kappa * prev(k - j);
    v *= (1.0 - kappa) * (1.0 + kappa);
    if (!(v > 1e-10)) return k;
  }
  return n;
}

Eigen::MatrixXd toeplitz(const Eigen::VectorXd& column, Index n) {
  Eigen::MatrixXd m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = column(std::abs(i - j));
  return m;
}

void check_toeplitz_psd(const Eigen::VectorXd& column) {
  const Index n = column.size();
  const Index k = levinson_breakdown(column);
  if (k == n) return;
  // Leading (k+1)x(k+1) block is singular or indefinite. Interlacing bounds
  // the full minimum eigenvalue by the block's.
  const double lead = min_eigenvalue(toeplitz(column, k + 1));
  if (lead < kEigenvalueFloor)
    throw Error(Errc::not_positive_semidefinite,
                "Toeplitz leading block of order " + std::to_string(k + 1) +
                    " has eigenvalue " + format_number(lead));
  if (n > kDenseDimensionCap)
    throw Error(Errc::not_positive_semidefinite,
                "singular Toeplitz matrix above the dense cap cannot be certified");
  const double full = min_eigenvalue(toeplitz(column, n));
  if (full < kEigenvalueFloor)
    throw Error(Errc::not_positive_semidefinite,
                "minimum eigenvalue " + format_number(full));
}

double block_delta(const BlockIdentical& b, Index n) {
  const double m = static_cast<double>(b.m);
  const double rest = static_cast<double>(n - b.m);
  return m * (m - 1.0) + 2.0 * m * rest * std::sqrt(b.xi) + rest * (rest - 1.0) * b.xi;
}

}  // namespace

std::string family_name(const FamilySpec& spec) {
  return std::visit(Overloaded{
                        [](const Iid&) { return std::string("iid"); },
                        [](const OrnsteinUhlenbeck&) { return std::string("ou"); },
                        [](const LongRange&) { return std::string("lrd"); },
                        [](const Equicorrelated&) { return std::string("equicorrelated"); },
                        [](const BlockIdentical&) { return std::string("block_identical"); },
                        [](const CustomStationary&) { return std::string("custom_stationary"); },
                        [](const PowerLogGrowth&) { return std::string("power_log"); },
                    },
                    spec);
}

std::string family_label(const FamilySpec& spec) {
  return std::visit(
      Overloaded{
          [](const Iid&) { return std::string("iid"); },
          [](const OrnsteinUhlenbeck& f) { return "ou(alpha=" + format_number(f.alpha) + ")"; },
          [](const LongRange& f) {
            std::string s = "lrd(D=" + format_number(f.d_exponent);
            if (f.shift != 0.0) s += ";shift=" + format_number(f.shift);
            return s + ")";
          },
          [](const Equicorrelated& f) {
            return "equicorrelated(rho=" + format_number(f.rho) + ")";
          },
          [](const BlockIdentical& f) {
            return "block_identical(m=" + std::to_string(f.m) + ";xi=" + format_number(f.xi) +
                   ")";
          },
          [](const CustomStationary& f) {
            return "custom_stationary(lags=" + std::to_string(f.lags.size()) +
                   ";tail=" + format_number(f.tail) + ")";
          },
          [](const PowerLogGrowth& f) {
            return "power_log(a=" + format_number(f.power) + ";b=" +
                   format_number(f.log_exponent) + ")";
          },
      },
      spec);
}

void validate_family(const FamilySpec& spec) {
  std::visit(Overloaded{
                 [](const Iid&) {},
                 [](const OrnsteinUhlenbeck& f) {
                   if (!(f.alpha > 0.0) || !std::isfinite(f.alpha)) invalid("ou alpha must be > 0");
                 },
                 [](const LongRange& f) {
                   if (!(f.d_exponent > 0.0 && f.d_exponent < 1.0)) invalid("lrd D must lie in (0,1)");
                   if (!(f.shift >= 0.0) || !std::isfinite(f.shift)) invalid("lrd shift must be >= 0");
                 },
                 [](const Equicorrelated& f) {
                   if (!(f.rho >= 0.0 && f.rho < 1.0)) invalid("equicorrelated rho must lie in [0,1)");
                 },
                 [](const BlockIdentical& f) {
                   if (f.m < 1) invalid("block size m must be >= 1");
                   if (!(f.xi >= 0.0 && f.xi < 1.0)) invalid("block xi must lie in [0,1)");
                 },
                 [](const CustomStationary& f) {
                   for (double v : f.lags)
                     if (!(std::abs(v) <= 1.0)) invalid("custom lags must lie in [-1,1]");
                   if (!(std::abs(f.tail) <= 1.0)) invalid("custom tail must lie in [-1,1]");
                 },
                 [](const PowerLogGrowth& f) {
                   if (!std::isfinite(f.power) || !std::isfinite(f.log_exponent))
                     invalid("power_log parameters must be finite");
                 },
             },
             spec);
}

bool is_stationary(const FamilySpec& spec) {
  return std::holds_alternative<Iid>(spec) || std::holds_alternative<OrnsteinUhlenbeck>(spec) ||
         std::holds_alternative<LongRange>(spec) ||
         std::holds_alternative<Equicorrelated>(spec) ||
         std::holds_alternative<CustomStationary>(spec);
}

double autocorrelation(const FamilySpec& spec, Index lag) {
  lag = std::abs(lag);
  if (lag == 0) return 1.0;
  const double d = static_cast<double>(lag);
  return std::visit(
      Overloaded{
          [](const Iid&) { return 0.0; },
          [d](const OrnsteinUhlenbeck& f) { return std::exp(-f.alpha * d); },
          [d](const LongRange& f) { return std::pow(d + f.shift, -f.d_exponent); },
          [](const Equicorrelated& f) { return f.rho; },
          [lag](const CustomStationary& f) {
            return lag <= static_cast<Index>(f.lags.size()) ? f.lags[lag - 1] : f.tail;
          },
          [](const BlockIdentical&) -> double { invalid("block_identical is not stationary"); },
          [](const PowerLogGrowth&) -> double { invalid("power_log has no covariance"); },
      },
      spec);
}

double family_delta(const FamilySpec& spec, Index n) {
  if (n < 1) invalid("n must be >= 1");
  validate_family(spec);
  const double nd = static_cast<double>(n);
  auto stationary_sum = [n](const FamilySpec& s, Index last_lag) {
    if (n > kLinearBudget) invalid("n exceeds the linear-time budget");
    double sum = 0.0;
    for (Index d = 1; d <= std::min(last_lag, n - 1); ++d)
      sum += static_cast<double>(n - d) * std::abs(autocorrelation(s, d));
    return sum;
  };
  return std::visit(
      Overloaded{
          [](const Iid&) { return 0.0; },
          [&](const OrnsteinUhlenbeck& f) {
            if (n <= kDirectSumLimit) return 2.0 * stationary_sum(spec, n - 1);
            // sum_{d<n} (n - d) phi^d = phi (n (1 - phi) - (1 - phi^n)) / (1 - phi)^2
            const double phi = std::exp(-f.alpha);
            const double q = -std::expm1(-f.alpha);
            return 2.0 * phi * (nd * q + std::expm1(nd * -f.alpha)) / (q * q);
          },
          [&](const LongRange&) { return 2.0 * stationary_sum(spec, n - 1); },
          [nd](const Equicorrelated& f) { return f.rho * nd * (nd - 1.0); },
          [n](const BlockIdentical& f) {
            if (f.m > n) throw Error(Errc::block_exceeds_dimension, "block larger than n");
            return block_delta(f, n);
          },
          [&](const CustomStationary& f) {
            const Index listed = static_cast<Index>(f.lags.size());
            double sum = 0.0;
            for (Index d = 1; d <= std::min(listed, n - 1); ++d)
              sum += static_cast<double>(n - d) * std::abs(f.lags[d - 1]);
            if (n - 1 > listed) {
              // sum_{d=listed+1}^{n-1} (n - d)
              const double k = static_cast<double>(n - 1 - listed);
              sum += std::abs(f.tail) * k * (k + 1.0) / 2.0;
            }
            return 2.0 * sum;
          },
          [nd](const PowerLogGrowth& f) {
            if (nd < 2.0) return 0.0;
            return std::pow(nd, f.power) * std::pow(std::log(nd), -f.log_exponent);
          },
      },
      spec);
}

double CovarianceModel::operator()(Index i, Index j) const {
  switch (storage_) {
    case Storage::dense: return matrix_(i, j);
    case Storage::toeplitz: return column_(std::abs(i - j));
    case Storage::block: {
      if (i == j) return 1.0;
      const bool a = i < block_.m;
      const bool b = j < block_.m;
      if (a && b) return 1.0;
      if (a != b) return std::sqrt(block_.xi);
      return block_.xi;
    }
  }
  return 0.0;
}

Eigen::MatrixXd CovarianceModel::dense() const {
  if (storage_ == Storage::dense) return matrix_;
  if (storage_ == Storage::toeplitz) return toeplitz(column_, n_);
  Eigen::MatrixXd m(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index i = 0; i < n_; ++i) m(i, j) = (*this)(i, j);
  return m;
}

std::string CovarianceModel::label() const {
  return family_ ? family_label(*family_) : std::string("explicit");
}

const Eigen::VectorXd& CovarianceModel::first_column() const {
  if (storage_ != Storage::toeplitz) invalid("model is not Toeplitz");
  return column_;
}

const BlockIdentical& CovarianceModel::block() const {
  if (storage_ != Storage::block) invalid("model is not a block construction");
  return block_;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CovarianceModel build_explicit(const Eigen::MatrixXd& matrix) {
  const Index n = matrix.rows();
  if (n < 1 || matrix.cols() != n) throw Error(Errc::not_symmetric, "matrix must be square");
  if (!matrix.allFinite()) invalid("matrix has non-finite entries");
  for (Index j = 0; j < n; ++j) {
    if (std::abs(matrix(j, j) - 1.0) > kDiagonalTolerance)
      throw Error(Errc::not_unit_diagonal, "diagonal entry " + std::to_string(j) + " is " +
                                               format_number(matrix(j, j)));
    for (Index i = j + 1; i < n; ++i)
      if (std::abs(matrix(i, j) - matrix(j, i)) > kSymmetryTolerance)
        throw Error(Errc::not_symmetric,
                    "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
  }
  const double lambda = min_eigenvalue(matrix);
  if (lambda < kEigenvalueFloor)
    throw Error(Errc::not_positive_semidefinite, "minimum eigenvalue " + format_number(lambda));

  CovarianceModel model;
  model.n_ = n;
  model.storage_ = CovarianceModel::Storage::dense;
  model.matrix_ = matrix;
  model.delta_ = dependence_measure(model);
  return model;
}

CovarianceModel build_family(const FamilySpec& spec, Index n) {
  if (n < 1) invalid("n must be >= 1");
  validate_family(spec);
  if (std::holds_alternative<PowerLogGrowth>(spec))
    invalid("power_log is a growth law without a covariance realization");

  CovarianceModel model;
  model.n_ = n;
  model.family_ = spec;
  if (const auto* b = std::get_if<BlockIdentical>(&spec)) {
    if (b->m > n)
      throw Error(Errc::block_exceeds_dimension,
                  "block size " + std::to_string(b->m) + " exceeds n=" + std::to_string(n));
    model.storage_ = CovarianceModel::Storage::block;
    model.block_ = *b;
    model.delta_ = block_delta(*b, n);
    return model;
  }

  model.storage_ = CovarianceModel::Storage::toeplitz;
  model.column_.resize(n);
  for (Index d = 0; d < n; ++d) model.column_(d) = autocorrelation(spec, d);
  // OU, iid and equicorrelated with rho in [0,1) are positive definite in
  // closed form; the remaining stationary families are checked numerically.
  if (std::holds_alternative<LongRange>(spec) || std::holds_alternative<CustomStationary>(spec))
    check_toeplitz_psd(model.column_);
  model.delta_ = family_delta(spec, n);
  return model;
}

double dependence_measure(const CovarianceModel& model) {
  const Index n = model.size();
  if (model.storage() == CovarianceModel::Storage::dense) {
    double sum = 0.0;
    for (Index j = 1; j < n; ++j)
      for (Index i = 0; i < j; ++i) sum += std::abs(model(i, j));
    return 2.0 * sum;
  }
  return model.delta();
}

std::vector<GrowthPoint> growth_diagnostics(const FamilySpec& spec,
                                            std::span<const Index> n_list) {
  if (n_list.empty()) invalid("n_list must be nonempty");
  std::vector<GrowthPoint> out;
  out.reserve(n_list.size());
  Index previous = 0;
  for (Index n : n_list) {
    if (n <= previous) invalid("n_list must be strictly increasing positive integers");
    previous = n;
    const double delta = family_delta(spec, n);
    const double nd = static_cast<double>(n);
    out.push_back({n, delta, delta / (nd * nd)});
  }
  return out;
}

std::vector<PartialSumPoint> as_condition_partial_sums(const FamilySpec& spec, double gamma,
                                                       int i_max) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) invalid("gamma must be > 1");
  if (i_max < 1) invalid("i_max must be >= 1");
  std::vector<PartialSumPoint> out;
  out.reserve(static_cast<std::size_t>(i_max));
  double sum = 0.0;
  for (int i = 1; i <= i_max; ++i) {
    const double power = std::floor(std::pow(gamma, i));
    if (power > 9.0e18) invalid("floor(gamma^i) overflows");
    const Index n = static_cast<Index>(power);
    const double nd = static_cast<double>(n);
    const double increment = std::cbrt(family_delta(spec, n) / (nd * nd));
    sum += increment;
    out.push_back({i, n, increment, sum});
  }
  return out;
}

Index remark_block_size(double delta) {
  if (!(delta >= 0.0)) invalid("delta must be >= 0");
  return static_cast<Index>(std::floor((1.0 + std::sqrt(1.0 + 4.0 * delta)) / 2.0));
}

BlockIdentical block_for_delta(Index n, double delta) {
  if (n < 1) invalid("n must be >= 1");
  const Index m = remark_block_size(delta);
  if (m > n)
    throw Error(Errc::block_exceeds_dimension,
                "block size " + std::to_string(m) + " exceeds n=" + std::to_string(n));
  const double md = static_cast<double>(m);
  const double rest = static_cast<double>(n - m);
  const double remainder = delta - md * (md - 1.0);
  // remainder = b s + a s^2 with s = sqrt(xi)
  const double a = rest * (rest - 1.0);
  const double b = 2.0 * md * rest;
  double s = 0.0;
  if (remainder > 0.0) {
    if (b <= 0.0) invalid("no off-block entries left to carry the remaining dependence");
    s = 2.0 * remainder / (b + std::sqrt(b * b + 4.0 * a * remainder));
  }
  const double xi = s * s;
  if (!(xi < 1.0)) invalid("required xi is not below 1");
  return BlockIdentical{m, xi};
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  char buf[32];
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::output_write_failed, "matrix CSV write failed");
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) invalid("unparseable CSV cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) invalid("ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) invalid("empty CSV matrix");
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace gaussemp
