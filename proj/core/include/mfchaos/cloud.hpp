#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace mfchaos {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ConstPoint = Eigen::Map<const Vec>;
using MutPoint = Eigen::Map<Vec>;

/// Empirical probability measure: M equally weighted points in R^d, stored
/// row-major in one contiguous buffer.
class PointCloud {
 public:
  PointCloud() = default;

  /// `coords.size()` must be a positive multiple of `dim`; every coordinate finite.
  PointCloud(std::size_t dim, std::vector<double> coords);

  /// M copies of the origin.
  static PointCloud zeros(std::size_t dim, std::size_t count);
  static PointCloud from_points(const std::vector<Vec>& points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  ConstPoint point(std::size_t i) const { return ConstPoint(coords_.data() + i * dim_, dim_); }
  MutPoint point(std::size_t i) { return MutPoint(coords_.data() + i * dim_, dim_); }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }

  Vec mean() const;
  /// Population (1/M) covariance.
  Mat covariance() const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Discrete probability measure with arbitrary positive weights summing to 1.
class WeightedCloud {
 public:
  WeightedCloud() = default;
  WeightedCloud(PointCloud support, std::vector<double> weights);

  static WeightedCloud uniform(PointCloud support);

  std::size_t dim() const noexcept { return support_.dim(); }
  std::size_t size() const noexcept { return weights_.size(); }
  ConstPoint point(std::size_t i) const { return support_.point(i); }
  double weight(std::size_t i) const { return weights_[i]; }
  const PointCloud& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  PointCloud support_;
  std::vector<double> weights_;
};

/// c2(x, y) = |x - y|^2 / 2.
inline double half_sq_dist(ConstPoint x, ConstPoint y) { return 0.5 * (x - y).squaredNorm(); }

}  // namespace mfchaos
