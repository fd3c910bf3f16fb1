#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mfchaos/cloud.hpp"
#include "mfchaos/levy.hpp"
#include "mfchaos/mf_solver.hpp"
#include "mfchaos/model.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/stats.hpp"

namespace mfchaos {

enum class XiKind {
  W2Squared,      ///< Xi = C2(mu, nu)
  FirstMomentSq,  ///< Xi = |mean(mu) - mean(nu)|^2
  SigmaSq,        ///< Xi = Sigma(x, mu, nu)^2 of an average-form model
};

const char* to_string(XiKind k);

struct Xi {
  XiKind kind = XiKind::W2Squared;
  const MeanFieldModel* model = nullptr;  ///< required for SigmaSq
};

struct AlephEstimate {
  double mean = 0.0;
  double se = 0.0;
  bool exact = true;  ///< false when some trial fell back to Sinkhorn
  std::string method;
};

/// Monte Carlo aleph_N(rho; Xi): each trial draws N i.i.d. points from rho and
/// evaluates Xi(y_1, empirical of the other N - 1, rho).
AlephEstimate estimate_aleph(const PointCloud& rho, const Xi& xi, std::size_t n, std::size_t trials,
                             std::uint64_t seed, std::uint64_t job = 0, const TransportOptions& options = {});

/// epsilon_{d,q}(N) scaled by L * Mq^{2/q}; ParamError on excluded (d, q).
double fournier_guillin_rate(std::size_t d, double q, double n, double mq, double l);

struct OmegaRow {
  double dt = 0.0;
  double estimate = 0.0;  ///< (C2(dt) - C2(0)) / dt
  double se = 0.0;
};

struct OmegaReport {
  double closed_form = 0.0;   ///< drift + diffusion terms plus the jump coupling bound
  bool closed_form_exact = true;  ///< false when a jump bound enters
  double drift_term = 0.0;
  double diffusion_term = 0.0;
  double jump_bound = 0.0;
  double wg_bound = 0.0;      ///< W_G^2 + 1/2 |x - y|^2
  std::vector<OmegaRow> rows;
  double extrapolated = 0.0;  ///< Richardson intercept at dt -> 0
  double extrapolated_se = 0.0;
  double tolerance = 0.0;     ///< 3 se + 2 max(dt)
  bool matches_closed_form = true;
  bool within_wg_bound = true;
};

struct OmegaOptions {
  std::size_t replicates = 20;
  std::uint64_t job = 0;
};

/// Finite-difference estimate of the Dini derivative of C2 between the flows
/// delta_x e^{tA} and delta_y e^{tB}, from exactly sampled Levy increments
/// under a coupling that is optimal for the Gaussian parts.
OmegaReport omega_probe(const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y,
                        const std::vector<double>& dt_grid, std::size_t mc_size, std::uint64_t seed,
                        const OmegaOptions& options = {});

struct ExpStabilityRow {
  double t = 0.0;
  double lhs = 0.0;
  double se = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

struct ExpStabilityReport {
  std::vector<ExpStabilityRow> rows;
  LinearFit lhs_vs_t;
  bool pass = true;
};

/// C2(delta_x e^{tA}, delta_y e^{tB}) <= e^{beta t} c2(x, y) + alpha zeta_beta(t) on t_grid.
ExpStabilityReport exp_stability_check(const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y,
                                       double alpha, double beta, const std::vector<double>& t_grid,
                                       std::size_t mc_size, std::uint64_t seed, const OmegaOptions& options = {});

/// Coupled samples of the two Levy flows at time t (rows of the returned clouds pair up).
std::pair<PointCloud, PointCloud> sample_coupled_flows(const LevyTriplet& a, const LevyTriplet& b, const Vec& x,
                                                       const Vec& y, double t, std::size_t count,
                                                       std::uint64_t seed, std::uint64_t job);

struct PocConfig {
  double dt = 1e-3;
  double checkpoint_every = 0.1;
  std::size_t aleph_trials = 400;
  SolverConfig solver;           ///< mean-field solve; solver.m is the reference cloud size
  std::uint64_t seed = 0;
  double relaxed_triangle_b = 2.0;
  double slope_lo = -1.3;
  double slope_hi = -0.7;
};

struct PocPoint {
  std::size_t n = 0;
  double t = 0.0;
  double distance = 0.0;
  double se = 0.0;
  double aleph = 0.0;
  double aleph_se = 0.0;
  double bound = 0.0;
  bool verdict = true;
};

struct PocSummary {
  std::size_t n = 0;
  double sup_distance = 0.0;
  double sup_distance_se = 0.0;
  double sup_aleph = 0.0;
  double sup_aleph_se = 0.0;
  double bound = 0.0;
  bool envelope_ok = true;
};

struct ChaosReport {
  std::string model_id;
  std::vector<std::size_t> n_values;
  std::size_t trials = 0;
  XiKind xi = XiKind::SigmaSq;
  std::vector<PocPoint> points;
  std::vector<PocSummary> summary;
  double alpha = 0.0;  ///< constants used in K (after the jump moment factor)
  double beta = 0.0;
  double b = 2.0;
  double k = 0.0;
  double zeta_kt = 0.0;
  double c_calibrated = 0.0;
  LinearFit slope;
  double slope_lo = -1.3;
  double slope_hi = -0.7;
  bool trivial = false;
  bool envelope_holds = true;
  bool slope_ok = true;
  bool verdict = true;
  std::vector<std::string> warnings;
  MeanFieldSolution mean_field;
};

/// Propagation-of-chaos experiment: mean-field curve, synchronous pairs with
/// Xbar_0 = X_0 drawn from rho0 per N and trial, aleph_N along the curve, a
/// calibrated envelope check, and the log-log slope of sup_t distance vs N.
ChaosReport poc_rate_experiment(const MeanFieldModel& model, const PointCloud& rho0, double horizon,
                                const std::vector<std::size_t>& n_list, std::size_t trials, const PocConfig& config);

enum class RhoFamily { Uniform, Normal, Point };

RhoFamily rho_family_from_string(const std::string& name);
const char* to_string(RhoFamily f);

struct FgRow {
  std::size_t n = 0;
  double aleph = 0.0;
  double aleph_se = 0.0;
  double rate = 0.0;   ///< epsilon_{d,q}(N - 1) with L = 1
  double bound = 0.0;  ///< calibrated L * rate
  double margin = 0.0; ///< bound - aleph
  bool pass = true;
};

struct FgReport {
  RhoFamily family = RhoFamily::Uniform;
  std::size_t d = 1;
  double q = 5.0;
  double mq = 0.0;
  double l_calibrated = 0.0;
  std::vector<FgRow> rows;
  bool bound_holds = true;
  bool ratio_ok = true;  ///< aleph/bound never grows by more than 10% when N doubles
  std::vector<std::string> warnings;
};

struct FgConfig {
  /// family parameters: Uniform (lo, hi) per axis, Normal (mean, sd) per axis, Point (location)
  double p0 = 0.0;
  double p1 = 1.0;
  std::size_t reference_size = 2000;  ///< reference cloud when no exact 1-D formula applies
  std::uint64_t seed = 0;
};

/// Check MC aleph_N(rho; W2Squared) <= L epsilon_{d,q}(N - 1) with L calibrated at the smallest N.
FgReport fg_bound_check(RhoFamily family, std::size_t d, double q, const std::vector<std::size_t>& n_list,
                        std::size_t trials, const FgConfig& config);

}  // namespace mfchaos
