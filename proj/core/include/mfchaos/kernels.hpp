#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mfchaos/model.hpp"

namespace mfchaos::kernels {

/// b~(x, z) = kappa (z - x).
VecKernel linear_attraction(double kappa);
VecKernel zero_drift(std::size_t dim);
/// sigma~(x, z) = s I.
MatKernel constant_sigma(std::size_t dim, double s);
/// eta~(x, z) = eta0 I + eta1 diag(z - x).
MatKernel linear_eta(std::size_t dim, double eta0, double eta1);
MatKernel zero_matrix(std::size_t dim);

/// Lipschitz constants of the average form built from linear_attraction(kappa),
/// constant_sigma and linear_eta(., eta1).
LipschitzParams average_form_constants(double kappa, double eta1);

/// b(x, mu) = -theta x, sigma = s I, eta = eta0 I.
GeneralForm ou(std::size_t dim, double theta, double s, double eta0 = 0.0);
/// b(x, mu) = kappa (mean(mu) - x), sigma = s I, eta = eta0 I.
GeneralForm mean_attraction(std::size_t dim, double kappa, double s, double eta0 = 0.0);
/// b(x, mu) = -(1 + m) x with m the average coordinate of mean(mu); sigma = s I.
/// Driven by the curve delta_t this is the time-varying drift -(1 + t) x.
GeneralForm mean_ramp(std::size_t dim, double s);
GeneralForm zero(std::size_t dim);

}  // namespace mfchaos::kernels
