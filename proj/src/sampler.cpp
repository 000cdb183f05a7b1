#include "gaussemp/sampler.hpp"

#include "gaussemp/error.hpp"
#include "gaussemp/philox.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gaussemp {

Eigen::MatrixXd CholeskyFactor::dense() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  switch (kind_) {
    case Kind::dense:
      l = lower_.triangularView<Eigen::Lower>();
      break;
    case Kind::identity:
      l.setIdentity();
      break;
    case Kind::autoregressive: {
      const double innovation = std::sqrt(1.0 - phi_ * phi_);
      for (Index i = 0; i < n_; ++i) {
        l(i, 0) = std::pow(phi_, static_cast<double>(i));
        for (Index j = 1; j <= i; ++j) l(i, j) = std::pow(phi_, static_cast<double>(i - j)) * innovation;
      }
      break;
    }
    case Kind::equicorrelated:
      for (Index j = 0; j < n_; ++j) {
        l(j, j) = diagonal_(j);
        for (Index i = j + 1; i < n_; ++i) l(i, j) = below_(j);
      }
      break;
    case Kind::block: {
      const double idiosyncratic = std::sqrt(1.0 - loading_ * loading_);
      for (Index i = 0; i < n_; ++i) {
        l(i, 0) = i < block_m_ ? 1.0 : loading_;
        if (i >= block_m_) l(i, i) = idiosyncratic;
      }
      break;
    }
  }
  return l;
}

void CholeskyFactor::apply(const Eigen::Ref<const Eigen::MatrixXd>& z,
                           Eigen::Ref<Eigen::MatrixXd> x) const {
  const Index cols = z.cols();
  switch (kind_) {
    case Kind::dense:
      x.noalias() = lower_.triangularView<Eigen::Lower>() * z;
      return;
    case Kind::identity:
      x = z;
      return;
    case Kind::autoregressive: {
      const double innovation = std::sqrt(1.0 - phi_ * phi_);
      for (Index c = 0; c < cols; ++c) {
        x(0, c) = z(0, c);
        for (Index i = 1; i < n_; ++i) x(i, c) = phi_ * x(i - 1, c) + innovation * z(i, c);
      }
      return;
    }
    case Kind::equicorrelated:
      for (Index c = 0; c < cols; ++c) {
        double prefix = 0.0;
        for (Index i = 0; i < n_; ++i) {
          x(i, c) = prefix + diagonal_(i) * z(i, c);
          prefix += below_(i) * z(i, c);
        }
      }
      return;
    case Kind::block: {
      const double idiosyncratic = std::sqrt(1.0 - loading_ * loading_);
      for (Index c = 0; c < cols; ++c) {
        const double common = z(0, c);
        for (Index i = 0; i < n_; ++i)
          x(i, c) = i < block_m_ ? common : loading_ * common + idiosyncratic * z(i, c);
      }
      return;
    }
  }
}

CholeskyFactor factorize(const CovarianceModel& model) {
  CholeskyFactor f;
  f.n_ = model.size();
  if (const auto& family = model.family()) {
    if (std::holds_alternative<Iid>(*family)) {
      f.kind_ = CholeskyFactor::Kind::identity;
      return f;
    }
    if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&*family)) {
      f.kind_ = CholeskyFactor::Kind::autoregressive;
      f.phi_ = std::exp(-ou->alpha);
      return f;
    }
    if (const auto* eq = std::get_if<Equicorrelated>(&*family)) {
      f.kind_ = CholeskyFactor::Kind::equicorrelated;
      f.below_.resize(f.n_);
      f.diagonal_.resize(f.n_);
      double accumulated = 0.0;  // sum of squared column values above row j
      for (Index j = 0; j < f.n_; ++j) {
        const double d = std::sqrt(1.0 - accumulated);
        f.diagonal_(j) = d;
        f.below_(j) = (eq->rho - accumulated) / d;
        accumulated += f.below_(j) * f.below_(j);
      }
      return f;
    }
    if (model.storage() == CovarianceModel::Storage::block) {
      f.kind_ = CholeskyFactor::Kind::block;
      f.block_m_ = model.block().m;
      f.loading_ = std::sqrt(model.block().xi);
      return f;
    }
  }

  f.kind_ = CholeskyFactor::Kind::dense;
  for (double jitter = 0.0; jitter <= kJitterCeiling * (1.0 + 1e-9);
       jitter = jitter == 0.0 ? kJitterStart : jitter * 10.0) {
    f.lower_ = model.dense();
    f.lower_.diagonal().array() += jitter;
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(f.lower_);
    if (llt.info() == Eigen::Success) {
      f.jitter_ = jitter;
      return f;
    }
  }
  throw Error(Errc::factorization_failed,
              "Cholesky failed with jitter up to " + std::to_string(kJitterCeiling));
}

void standard_normals(std::uint64_t seed, std::uint64_t replication, Eigen::Ref<Eigen::VectorXd> z) {
  Philox4x32 engine(seed, replication);
  std::normal_distribution<double> normal;
  for (Index i = 0; i < z.size(); ++i) z(i) = normal(engine);
}

GaussianPath sample_path(const CholeskyFactor& factor, std::uint64_t master_seed,
                         std::uint64_t replication_index, std::string model_id) {
  GaussianPath path;
  path.values = sample_block(factor, master_seed, replication_index, 1).col(0);
  path.model_id = std::move(model_id);
  path.seed = master_seed;
  path.replication_index = replication_index;
  return path;
}

Eigen::MatrixXd sample_block(const CholeskyFactor& factor, std::uint64_t master_seed,
                             std::uint64_t first, Index count) {
  Eigen::MatrixXd z(factor.size(), count);
  for (Index c = 0; c < count; ++c)
    standard_normals(master_seed, first + static_cast<std::uint64_t>(c), z.col(c));
  Eigen::MatrixXd x(factor.size(), count);
  factor.apply(z, x);
  return x;
}

UniformPath make_uniform_path(Eigen::VectorXd u) {
  UniformPath path;
  path.sorted = u;
  path.values = std::move(u);
  std::sort(path.sorted.data(), path.sorted.data() + path.sorted.size());
  return path;
}

UniformPath uniformize(const Eigen::Ref<const Eigen::VectorXd>& x) {
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  Eigen::VectorXd u(x.size());
  for (Index i = 0; i < x.size(); ++i) u(i) = std::clamp(normal_cdf(x(i)), lo, hi);
  return make_uniform_path(std::move(u));
}

UniformPath uniformize(const GaussianPath& path) { return uniformize(path.values); }

}  // namespace gaussemp
