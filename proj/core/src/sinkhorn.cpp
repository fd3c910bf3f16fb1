#include <algorithm>
#include <cmath>
#include <limits>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

SinkhornResult sinkhorn_w2(const WeightedCloud& mu, const WeightedCloud& nu, double epsilon,
                           std::size_t max_iters, double tol) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParamError("ot_core: sinkhorn_w2: epsilon must be positive");
  }
  if (mu.dim() != nu.dim()) throw DimError("ot_core: sinkhorn_w2: dimensions differ");
  const auto m = static_cast<Eigen::Index>(mu.size());
  const auto n = static_cast<Eigen::Index>(nu.size());

  Mat c(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      c(i, j) = half_sq_dist(mu.point(static_cast<std::size_t>(i)), nu.point(static_cast<std::size_t>(j)));
    }
  }
  Vec log_a(m), log_b(n);
  for (Eigen::Index i = 0; i < m; ++i) log_a(i) = std::log(mu.weight(static_cast<std::size_t>(i)));
  for (Eigen::Index j = 0; j < n; ++j) log_b(j) = std::log(nu.weight(static_cast<std::size_t>(j)));

  Vec f = Vec::Zero(m), g = Vec::Zero(n);
  Vec scratch(std::max(m, n));

  auto row_lse = [&](Eigen::Index i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      scratch(j) = (g(j) - c(i, j)) / epsilon;
      mx = std::max(mx, scratch(j));
    }
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) s += std::exp(scratch(j) - mx);
    return mx + std::log(s);
  };
  auto col_lse = [&](Eigen::Index j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      scratch(i) = (f(i) - c(i, j)) / epsilon;
      mx = std::max(mx, scratch(i));
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::exp(scratch(i) - mx);
    return mx + std::log(s);
  };

  SinkhornResult out;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (Eigen::Index i = 0; i < m; ++i) f(i) = epsilon * (log_a(i) - row_lse(i));
    for (Eigen::Index j = 0; j < n; ++j) g(j) = epsilon * (log_b(j) - col_lse(j));
    out.iterations = it;

    // columns are exact after the g-update; measure the row marginals
    double violation = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) row += std::exp((f(i) + g(j) - c(i, j)) / epsilon);
      violation += std::abs(row - std::exp(log_a(i)));
    }
    if (violation < tol) {
      out.converged = true;
      break;
    }
  }

  double cost = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) cost += std::exp((f(i) + g(j) - c(i, j)) / epsilon) * c(i, j);
  }
  out.cost = cost;
  return out;
}

}  // namespace mfchaos
