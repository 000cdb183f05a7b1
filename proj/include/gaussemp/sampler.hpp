#pragma once

#include "gaussemp/covmodels.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>

namespace gaussemp {

inline constexpr double kJitterStart = 1e-12;
inline constexpr double kJitterCeiling = 1e-8;

/// Lower-triangular L with L L^T = C + jitter * I.
///
/// Families with a closed-form factor keep it implicit and apply it in O(n):
/// identity (iid), the AR(1) factor of the Ornstein-Uhlenbeck matrix, the
/// column-constant factor of the equicorrelated matrix, and the one-factor
/// block construction. Everything else is factorized densely.
class CholeskyFactor {
 public:
  enum class Kind { dense, identity, autoregressive, equicorrelated, block };

  Index size() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  double jitter_used() const noexcept { return jitter_; }

  /// Materialized lower-triangular factor.
  Eigen::MatrixXd dense() const;

  /// x = L z, column by column. Columns are independent replications.
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& z, Eigen::Ref<Eigen::MatrixXd> x) const;

 private:
  friend CholeskyFactor factorize(const CovarianceModel&);

  Index n_ = 0;
  Kind kind_ = Kind::identity;
  double jitter_ = 0.0;
  Eigen::MatrixXd lower_;      // dense
  double phi_ = 0.0;           // autoregressive coefficient
  Eigen::VectorXd below_;      // equicorrelated: L(i,j) = below_(j) for i > j
  Eigen::VectorXd diagonal_;   // equicorrelated diagonal
  Index block_m_ = 0;          // block construction
  double loading_ = 0.0;       // sqrt(xi)
};

CholeskyFactor factorize(const CovarianceModel& model);

struct GaussianPath {
  Eigen::VectorXd values;
  std::string model_id;
  std::uint64_t seed = 0;
  std::uint64_t replication_index = 0;
};

/// U_i = Phi(X_i) together with the ascending order statistics.
struct UniformPath {
  Eigen::VectorXd values;
  Eigen::VectorXd sorted;

  Index size() const noexcept { return values.size(); }
};

/// Fills z with i.i.d. N(0,1) from the Philox substream (seed, replication).
void standard_normals(std::uint64_t seed, std::uint64_t replication, Eigen::Ref<Eigen::VectorXd> z);

GaussianPath sample_path(const CholeskyFactor& factor, std::uint64_t master_seed,
                         std::uint64_t replication_index, std::string model_id = {});

/// Paths for replications first..first+count-1 as columns. Column r equals
/// L times the normals of replication first + r.
Eigen::MatrixXd sample_block(const CholeskyFactor& factor, std::uint64_t master_seed,
                             std::uint64_t first, Index count);

/// Standard normal CDF through erfc, accurate in both tails.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

UniformPath uniformize(const Eigen::Ref<const Eigen::VectorXd>& x);
UniformPath uniformize(const GaussianPath& path);

/// Uniform path from values already in (0,1); sorts a copy.
UniformPath make_uniform_path(Eigen::VectorXd u);

}  // namespace gaussemp
