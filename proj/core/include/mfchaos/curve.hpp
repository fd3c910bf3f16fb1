#pragma once

#include <cstddef>
#include <vector>

#include "mfchaos/cloud.hpp"

namespace mfchaos {

/// Clouds on a strictly increasing partition 0 = t_0 < ... < t_K of [0, T],
/// read piecewise-constant from the left: at(t) is the cloud at the last t_k <= t.
class MeasureCurve {
 public:
  MeasureCurve() = default;
  MeasureCurve(std::vector<double> times, std::vector<PointCloud> clouds);

  /// The constant curve equal to `cloud` on `times`.
  static MeasureCurve constant(std::vector<double> times, const PointCloud& cloud);

  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<PointCloud>& clouds() const noexcept { return clouds_; }
  const PointCloud& cloud(std::size_t k) const { return clouds_[k]; }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  /// Index of the last partition time <= t (with a 1e-9 relative snap).
  std::size_t index_at(double t) const;
  const PointCloud& at(double t) const { return clouds_[index_at(t)]; }

  /// Throws CurveCoverageError unless the partition spans [t0, t1].
  void require_covers(double t0, double t1) const;

 private:
  std::vector<double> times_;
  std::vector<PointCloud> clouds_;
};

/// Snap tolerance used when matching times to grids.
double time_tol(double scale);

}  // namespace mfchaos
