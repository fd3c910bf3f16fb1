#include "mfchaos/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <vector>

#include "mfchaos/error.hpp"

namespace mfchaos {

MeanStderr mean_stderr(std::span<const double> xs) {
  if (xs.empty()) throw SizeError("stats: mean of an empty sample");
  const auto n = static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean = s / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

LinearFit wls(std::span<const double> x, std::span<const double> y, std::span<const double> w, double confidence) {
  if (x.size() != y.size() || x.size() != w.size()) throw SizeError("stats: regression inputs differ in length");
  if (x.size() < 3) throw SizeError("stats: regression needs at least three points");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0)) throw ParamError("stats: regression weights must be positive");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ParamError("stats: regression abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += w[i] * r * r;
  }
  const double dof = static_cast<double>(x.size()) - 2.0;
  const double s2 = rss / dof;
  fit.slope_se = std::sqrt(s2 / sxx);
  fit.intercept_se = std::sqrt(s2 * (1.0 / sw + mx * mx / sxx));
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  fit.slope_lo = fit.slope - tq * fit.slope_se;
  fit.slope_hi = fit.slope + tq * fit.slope_se;
  return fit;
}

LinearFit ols(std::span<const double> x, std::span<const double> y, double confidence) {
  const std::vector<double> w(x.size(), 1.0);
  return wls(x, y, w, confidence);
}

}  // namespace mfchaos
