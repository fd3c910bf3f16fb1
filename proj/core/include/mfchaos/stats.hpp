#pragma once

#include <cstddef>
#include <span>

namespace mfchaos {

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean
};

/// Sample mean and standard error of the mean (n - 1 variance).
MeanStderr mean_stderr(std::span<const double> xs);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double slope_lo = 0.0;  ///< confidence interval for the slope
  double slope_hi = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = a + b x with a two-sided Student-t interval.
LinearFit ols(std::span<const double> x, std::span<const double> y, double confidence = 0.95);

/// Weighted least squares with weights w_i (e.g. 1 / se_i^2).
LinearFit wls(std::span<const double> x, std::span<const double> y, std::span<const double> w,
              double confidence = 0.95);

}  // namespace mfchaos
