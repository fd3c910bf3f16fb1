#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfchaos/curve.hpp"
#include "mfchaos/model.hpp"

namespace mfchaos {

/// zeta_beta(t) = (e^{beta t} - 1) / beta, and t when beta = 0.
double zeta(double beta, double t);

struct SolverConfig {
  std::size_t m = 1000;          ///< cloud size
  double mesh = 0.01;            ///< partition mesh
  double dt = 1e-3;              ///< inner Euler step; must divide every cell
  double picard_tol = 1e-8;      ///< stop when sup_t C2(mu^{k+1}_t, mu^k_t) < picard_tol
  std::size_t max_picard_iters = 50;
  double window = 0.0;           ///< Picard window; 0 selects it from the declared constants
  std::uint64_t seed = 0;
  std::uint64_t job = 0;
  bool exact_compound_poisson = true;
  /// Clouds larger than this (d > 1) compare by the index-paired upper bound.
  std::size_t residual_assignment_limit = 1500;

  void validate() const;
};

/// Partition 0, h, 2h, ..., T; throws ParamError unless T is a multiple of h.
std::vector<double> uniform_partition(double horizon, double mesh);

/// Evolve rho0 from mu_curve's first time in [t0, t1] under the generator frozen
/// at mu_curve's left endpoint on each cell. The output lives on the curve's
/// partition restricted to [t0, t1]. Particle i at global step s = round(t/dt)
/// reads stream (seed, job, i, s), so solutions glue bitwise.
MeasureCurve solve_linearized(const MeanFieldModel& model, const MeasureCurve& mu_curve, const PointCloud& rho0,
                              const SolverConfig& config, double t0, double t1);
MeasureCurve solve_linearized(const MeanFieldModel& model, const MeasureCurve& mu_curve, const PointCloud& rho0,
                              const SolverConfig& config);

struct MeanFieldSolution {
  MeasureCurve curve;
  std::vector<std::size_t> picard_iters_per_window;
  std::vector<std::vector<double>> residuals_per_window;
  double window = 0.0;
  std::vector<std::string> warnings;
};

/// Picard window h with alpha zeta_beta(h) = 1/2.
double default_window(double alpha, double beta);

/// Windowed Picard iteration for the self-consistent curve on [0, T]. The
/// initial guess on each window is the constant curve at the window's start;
/// producing the first iterate from it is not counted, so a measure-independent
/// model converges after one residual evaluation.
MeanFieldSolution solve_mean_field(const MeanFieldModel& model, const PointCloud& rho0, double horizon,
                                   const SolverConfig& config);

/// C2 between two clouds of one curve family: exact in d = 1 or for small
/// clouds, otherwise the index-paired upper bound (meaningful under common noise).
double curve_distance(const PointCloud& a, const PointCloud& b, std::size_t assignment_limit, bool* exact = nullptr);

struct PcaRow {
  double mesh = 0.0;
  double distance_to_finest = 0.0;  ///< sup_t C2(rho^(mesh), rho^(finest))
  double distance_to_next = 0.0;    ///< sup_t C2(rho^(mesh), rho^(next finer)); 0 for the finest
};

/// PCA solutions for strictly decreasing nested meshes, compared at the
/// coarsest partition's times. With `mu_curve`, cell k freezes the generator at
/// mu_curve.at(t_{k-1}); without it, each mesh solves the self-consistent problem.
std::vector<PcaRow> pca_refinement_study(const MeanFieldModel& model, const std::optional<MeasureCurve>& mu_curve,
                                         const PointCloud& rho0, double horizon, const std::vector<double>& meshes,
                                         const SolverConfig& config);

struct StabilityRow {
  double t = 0.0;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  double initial_cost = 0.0;
  bool pass = true;
};

/// Check C2(rho_t, sigma_t) <= C2(rho0, sigma0) e^{beta t} + alpha zeta_beta(t) sup_{s<=t} C2(mu_s, nu_s)
/// at the partition times of mu_curve, over `replicates` noise realizations
/// (rho and sigma share noise within a replicate; sigma0 is first reordered
/// into its optimal matching with rho0).
StabilityReport stability_check(const MeanFieldModel& model, const MeasureCurve& mu_curve, const MeasureCurve& nu_curve,
                                const PointCloud& rho0, const PointCloud& sigma0, double alpha, double beta,
                                const SolverConfig& config, std::size_t replicates);

}  // namespace mfchaos
