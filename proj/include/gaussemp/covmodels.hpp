#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gaussemp {

using Index = Eigen::Index;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kDiagonalTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr Index kDenseDimensionCap = 5000;

// Covariance families. Stationary families are parameterized by their
// autocorrelation r(d) at integer lag d, with r(0) = 1.

struct Iid {};

/// r(d) = exp(-alpha d), the integer-time Ornstein-Uhlenbeck covariance.
struct OrnsteinUhlenbeck {
  double alpha = 1.0;
};

/// r(d) = (d + shift)^(-d_exponent) for d >= 1. With shift = 0 this is the
/// pure power law; the Toeplitz matrix is then indefinite for n >= 3, so
/// simulation uses shift >= 1 (convex, decreasing, hence positive definite).
struct LongRange {
  double d_exponent = 0.5;
  double shift = 0.0;
};

struct Equicorrelated {
  double rho = 0.0;
};

/// The first m coordinates are identical; the remaining ones load on the
/// shared factor with weight sqrt(xi):
///   X_1..m = Z,  X_j = sqrt(xi) Z + sqrt(1 - xi) e_j  for j > m.
struct BlockIdentical {
  Index m = 1;
  double xi = 0.0;
};

/// r(d) = lags[d - 1] for 1 <= d <= lags.size(), r(d) = tail beyond.
struct CustomStationary {
  std::vector<double> lags;
  double tail = 0.0;
};

/// Diagnostic growth law Delta(n) = n^power (ln n)^(-log_exponent). It has no
/// covariance realization; only growth diagnostics accept it.
struct PowerLogGrowth {
  double power = 2.0;
  double log_exponent = 4.0;
};

using FamilySpec = std::variant<Iid, OrnsteinUhlenbeck, LongRange, Equicorrelated,
                                BlockIdentical, CustomStationary, PowerLogGrowth>;

std::string family_name(const FamilySpec& spec);
std::string family_label(const FamilySpec& spec);
void validate_family(const FamilySpec& spec);
bool is_stationary(const FamilySpec& spec);

/// Autocorrelation at lag d of a stationary family.
double autocorrelation(const FamilySpec& spec, Index lag);

/// Exact Delta(n) without materializing a matrix; O(n) for stationary
/// families, closed form for the others.
double family_delta(const FamilySpec& spec, Index n);

/// Correlation matrix of a standardized Gaussian vector. Stationary and
/// block families keep a compact representation; dense() materializes.
class CovarianceModel {
 public:
  enum class Storage { dense, toeplitz, block };

  Index size() const noexcept { return n_; }
  double operator()(Index i, Index j) const;
  Eigen::MatrixXd dense() const;

  /// Delta = sum over i != j of |C_ij|.
  double delta() const noexcept { return delta_; }
  Storage storage() const noexcept { return storage_; }
  const std::optional<FamilySpec>& family() const noexcept { return family_; }
  std::string label() const;

  /// Lags 0..n-1 of a Toeplitz model.
  const Eigen::VectorXd& first_column() const;
  const BlockIdentical& block() const;

 private:
  friend CovarianceModel build_explicit(const Eigen::MatrixXd&);
  friend CovarianceModel build_family(const FamilySpec&, Index);

  CovarianceModel() = default;

  Index n_ = 0;
  Storage storage_ = Storage::dense;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd column_;
  BlockIdentical block_;
  std::optional<FamilySpec> family_;
  double delta_ = 0.0;
};

CovarianceModel build_explicit(const Eigen::MatrixXd& matrix);
CovarianceModel build_family(const FamilySpec& spec, Index n);

/// 2 * sum_{i<j} |C_ij|, summed over the strict upper triangle.
double dependence_measure(const CovarianceModel& model);

struct GrowthPoint {
  Index n;
  double delta;
  double ratio;  // delta / n^2
};

std::vector<GrowthPoint> growth_diagnostics(const FamilySpec& spec,
                                            std::span<const Index> n_list);

struct PartialSumPoint {
  int i;
  Index n;           // floor(gamma^i)
  double increment;  // (Delta(n) / n^2)^(1/3)
  double partial_sum;
};

std::vector<PartialSumPoint> as_condition_partial_sums(const FamilySpec& spec,
                                                       double gamma, int i_max);

/// floor((1 + sqrt(1 + 4 delta)) / 2): coordinates forced to coincide.
Index remark_block_size(double delta);

/// Block construction whose total Delta equals the target, solving for xi.
BlockIdentical block_for_delta(Index n, double delta);

/// Minimum eigenvalue check used by the builders.
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

}  // namespace gaussemp
