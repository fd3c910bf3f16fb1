#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "mfchaos/cloud.hpp"

namespace mfchaos {

/// Bijection i -> perm[i] between two equal-size uniform clouds.
struct Assignment {
  std::vector<std::size_t> perm;
};

/// Nonnegative transport masses; row i sums to the source weight of atom i.
struct DensePlan {
  Mat mass;
};

using TransportPlan = std::variant<Assignment, DensePlan>;

enum class AssignmentSolver {
  Auto,    ///< sorting in d = 1, Jonker-Volgenant otherwise
  Sorted,  ///< monotone matching, valid only in d = 1
  Lapjv,
};

struct AssignmentResult {
  double cost = 0.0;
  Assignment plan;
};

struct DenseResult {
  double cost = 0.0;
  DensePlan plan;
};

struct SinkhornResult {
  double cost = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Solve the square linear assignment problem min sum_i cost(i, perm[i]).
std::vector<std::size_t> solve_lap(const Mat& cost);

/// C2(mu, nu) between equal-size uniform clouds, with an optimal permutation.
AssignmentResult exact_w2_assignment(const PointCloud& mu, const PointCloud& nu,
                                     AssignmentSolver solver = AssignmentSolver::Auto);

/// Exact Kantorovich optimum by simplex on the transport LP. Oracle only:
/// throws ScaleError when mu.size() * nu.size() > 64.
DenseResult bruteforce_ot(const WeightedCloud& mu, const WeightedCloud& nu);

inline constexpr std::size_t kBruteforceMaxCells = 64;

/// Log-domain Sinkhorn; `cost` is <plan, c2> without the entropy term.
SinkhornResult sinkhorn_w2(const WeightedCloud& mu, const WeightedCloud& nu, double epsilon,
                           std::size_t max_iters, double tol);

/// (1/N) sum_k c2(x_k, y_k).
double tensorized_cost(const PointCloud& x, const PointCloud& y);

/// (1/N) sum_k C2(mu_k, nu_k).
double tensor_product_upper_bound(const std::vector<std::pair<PointCloud, PointCloud>>& pairs);

/// Exact C2 between two discrete measures on the real line.
double w2_1d(const WeightedCloud& mu, const WeightedCloud& nu);
double w2_1d(const PointCloud& mu, const PointCloud& nu);

/// Exact C2 between a cloud on the real line and the uniform law on [a, b].
double w2_1d_vs_uniform(const PointCloud& mu, double a, double b);

enum class CostMethod { Quantile1D, Assignment, Replicated, Bruteforce, Sinkhorn };

const char* to_string(CostMethod m);

struct CostEstimate {
  double cost = 0.0;
  bool exact = true;
  CostMethod method = CostMethod::Assignment;
};

struct TransportOptions {
  /// Largest assignment problem attempted (after replication).
  std::size_t assignment_limit = 3000;
  /// Sinkhorn epsilon as a fraction of the mean pairwise cost.
  double sinkhorn_relative_epsilon = 0.005;
  std::size_t sinkhorn_max_iters = 20000;
  double sinkhorn_tol = 1e-7;
};

/// C2 between two uniform clouds of arbitrary sizes, by the cheapest exact
/// route available; falls back to Sinkhorn (flagged inexact) when none fits.
CostEstimate transport_cost(const PointCloud& mu, const PointCloud& nu,
                            const TransportOptions& options = {});

/// Symmetric positive square root with eigenvalues clamped at zero.
Mat sqrtm_psd(const Mat& a);

/// Bures-Wasserstein distance W_S(a, b) between PSD matrices.
double bures_wasserstein(const Mat& a, const Mat& b);
double bures_wasserstein_sq(const Mat& a, const Mat& b);

/// C2 between N(x0, a) and N(y0, b).
double gaussian_w2(const Vec& x0, const Mat& a, const Vec& y0, const Mat& b);

inline constexpr double kMatrixTol = 1e-10;

}  // namespace mfchaos
