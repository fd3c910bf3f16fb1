#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mfchaos/cloud.hpp"
#include "mfchaos/curve.hpp"
#include "mfchaos/levy.hpp"
#include "mfchaos/model.hpp"

namespace mfchaos {

struct ParticleState {
  double t = 0.0;
  PointCloud positions;
  std::optional<PointCloud> coupled;
};

struct SimConfig {
  std::size_t n = 0;
  std::size_t dim = 1;
  double horizon = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  /// Separates independent experiments that share a seed.
  std::uint64_t job = 0;
  /// Reporting times in [0, T]; each must lie on the dt grid. Empty means {0, T}.
  std::vector<double> checkpoints;
  /// Exact compound-Poisson counts per step; otherwise at most one event per atom.
  bool exact_compound_poisson = true;

  /// Number of dt steps in [0, T]; throws ParamError unless T is a multiple of dt.
  std::size_t step_count() const;
  /// Sorted checkpoint step indices.
  std::vector<std::size_t> checkpoint_steps() const;
  void validate() const;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t atom = 0;
};

/// Driving noise of one step: Brownian increments and jump events per particle.
struct DriverNoise {
  std::size_t n = 0;
  std::size_t dim = 0;
  double dt = 0.0;
  std::vector<double> brownian;            ///< n x dim, row-major
  std::vector<double> jump_sum;            ///< n x dim, sum of base jump vectors z
  std::vector<std::vector<JumpEvent>> events;

  ConstPoint db(std::size_t i) const { return ConstPoint(brownian.data() + i * dim, static_cast<Eigen::Index>(dim)); }
  ConstPoint dz(std::size_t i) const { return ConstPoint(jump_sum.data() + i * dim, static_cast<Eigen::Index>(dim)); }
};

/// Noise for particles [0, n) at global step `step` (time [step*dt, (step+1)*dt)).
/// Particle i reads the stream (seed, job, i, step).
DriverNoise draw_noise(std::uint64_t seed, std::uint64_t job, std::size_t n, std::size_t dim, std::uint64_t step,
                       double dt, const std::optional<DiscreteLevyMeasure>& base, bool exact_compound_poisson);

/// Euler-Maruyama increment for one particle with coefficients tau.
void apply_increment(MutPoint x, const CoefficientTuple& tau, double dt, ConstPoint db, ConstPoint dz,
                     const Vec& compensator);

/// One explicit step of the interacting system, each particle seeing the
/// truncated empirical measure of the others.
ParticleState step(const ParticleState& state, const MeanFieldModel& model, double dt, const DriverNoise& noise);

/// One step of independent particles under coefficients frozen at `mu`.
void step_frozen(PointCloud& x, const MeanFieldModel& model, const PointCloud& mu, double dt,
                 const DriverNoise& noise);

/// Throws DivergenceError if any coordinate is non-finite or above 1e100.
void check_finite(const PointCloud& x, std::size_t step, double time);

struct Checkpoint {
  double t = 0.0;
  ParticleState state;
};

std::vector<Checkpoint> simulate(const SimConfig& config, const MeanFieldModel& model, const PointCloud& initial);

struct PairCheckpoint {
  double t = 0.0;
  ParticleState state;
  double mean_cost = 0.0;  ///< (1/N) sum_i 1/2 |X_i - Xbar_i|^2
};

/// Interacting system and its synchronously coupled mean-field partner, both
/// started from `initial` and driven by the same noise; the partner's
/// coefficients use mf_curve at the start of each step.
std::vector<PairCheckpoint> simulate_synchronous_pair(const SimConfig& config, const MeanFieldModel& model,
                                                      const MeasureCurve& mf_curve, const PointCloud& initial);

/// mu(x'_k): the N - 1 points other than particle k.
PointCloud truncated_empirical(const ParticleState& state, std::size_t k);

}  // namespace mfchaos
