#include "mfchaos/cloud.hpp"

#include <cmath>
#include <string>

#include "mfchaos/error.hpp"

namespace mfchaos {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw DimError("cloud: dimension must be positive");
  if (coords_.empty()) throw EmptyMeasureError("cloud: a point cloud needs at least one point");
  if (coords_.size() % dim_ != 0) {
    throw DimError("cloud: coordinate count " + std::to_string(coords_.size()) +
                   " is not a multiple of dimension " + std::to_string(dim_));
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ParamError("cloud: non-finite coordinate");
  }
}

PointCloud PointCloud::zeros(std::size_t dim, std::size_t count) {
  return PointCloud(dim, std::vector<double>(dim * count, 0.0));
}

PointCloud PointCloud::from_points(const std::vector<Vec>& points) {
  if (points.empty()) throw EmptyMeasureError("cloud: no points given");
  const auto d = static_cast<std::size_t>(points.front().size());
  std::vector<double> coords;
  coords.reserve(d * points.size());
  for (const auto& p : points) {
    if (static_cast<std::size_t>(p.size()) != d) throw DimError("cloud: ragged point list");
    coords.insert(coords.end(), p.data(), p.data() + d);
  }
  return PointCloud(d, std::move(coords));
}

Vec PointCloud::mean() const {
  Vec m = Vec::Zero(static_cast<Eigen::Index>(dim_));
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) m += point(i);
  return m / static_cast<double>(n);
}

Mat PointCloud::covariance() const {
  const Vec m = mean();
  Mat c = Mat::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec r = point(i) - m;
    c.noalias() += r * r.transpose();
  }
  return c / static_cast<double>(n);
}

WeightedCloud::WeightedCloud(PointCloud support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (weights_.size() != support_.size()) {
    throw SizeError("cloud: " + std::to_string(weights_.size()) + " weights for " +
                    std::to_string(support_.size()) + " atoms");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ParamError("cloud: atom weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ParamError("cloud: weights sum to " + std::to_string(total) + ", expected 1");
  }
}

WeightedCloud WeightedCloud::uniform(PointCloud support) {
  const std::size_t n = support.size();
  return WeightedCloud(std::move(support), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

}  // namespace mfchaos
