#include "mfchaos/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/error.hpp"

namespace mfchaos {

double time_tol(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

MeasureCurve::MeasureCurve(std::vector<double> times, std::vector<PointCloud> clouds)
    : times_(std::move(times)), clouds_(std::move(clouds)) {
  if (times_.empty()) throw SizeError("mf_solver: a measure curve needs at least one time");
  if (times_.size() != clouds_.size()) throw SizeError("mf_solver: curve has mismatched times and clouds");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw ParamError("mf_solver: curve times must be strictly increasing");
  }
  for (const auto& c : clouds_) {
    if (c.dim() != clouds_.front().dim() || c.size() != clouds_.front().size()) {
      throw SizeError("mf_solver: curve clouds must share size and dimension");
    }
  }
}

MeasureCurve MeasureCurve::constant(std::vector<double> times, const PointCloud& cloud) {
  std::vector<PointCloud> clouds(times.size(), cloud);
  return MeasureCurve(std::move(times), std::move(clouds));
}

std::size_t MeasureCurve::index_at(double t) const {
  const double tol = time_tol(times_.back());
  if (t < times_.front() - tol) {
    throw CurveCoverageError("mf_solver: time " + std::to_string(t) + " precedes the curve start " +
                             std::to_string(times_.front()));
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t + tol);
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - times_.begin()) - 1));
}

void MeasureCurve::require_covers(double t0, double t1) const {
  const double tol = time_tol(t1);
  if (times_.empty() || times_.front() > t0 + tol || times_.back() < t1 - tol) {
    throw CurveCoverageError("mf_solver: curve does not cover [" + std::to_string(t0) + ", " + std::to_string(t1) +
                             "]");
  }
}

}  // namespace mfchaos
