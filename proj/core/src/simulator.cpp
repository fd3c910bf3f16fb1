#include "mfchaos/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/parallel.hpp"
#include "mfchaos/rng.hpp"

namespace mfchaos {

namespace {

// below this many particles a step runs on the calling thread
constexpr std::size_t kParallelThreshold = 4096;

void for_particles(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n >= kParallelThreshold) {
    parallel_for(n, body);
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

Vec compensator_of(const MeanFieldModel& model) {
  if (!model.has_jumps()) return Vec::Zero(static_cast<Eigen::Index>(model.dim()));
  return model.base_jump()->first_moment();
}

}  // namespace

std::size_t SimConfig::step_count() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParamError("simulator: dt must be positive");
  if (horizon < 0.0 || !std::isfinite(horizon)) throw ParamError("simulator: horizon must be nonnegative");
  const double k = std::round(horizon / dt);
  if (std::abs(k * dt - horizon) > time_tol(horizon)) {
    throw ParamError("simulator: horizon " + std::to_string(horizon) + " is not a multiple of dt " +
                     std::to_string(dt));
  }
  return static_cast<std::size_t>(k);
}

std::vector<std::size_t> SimConfig::checkpoint_steps() const {
  const std::size_t total = step_count();
  std::vector<std::size_t> out;
  if (checkpoints.empty()) {
    out = {0, total};
  } else {
    for (double t : checkpoints) {
      if (t < -time_tol(horizon) || t > horizon + time_tol(horizon)) {
        throw ParamError("simulator: checkpoint " + std::to_string(t) + " lies outside [0, T]");
      }
      const double k = std::round(t / dt);
      if (std::abs(k * dt - t) > time_tol(horizon)) {
        throw ParamError("simulator: checkpoint " + std::to_string(t) + " is not on the dt grid");
      }
      out.push_back(static_cast<std::size_t>(k));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SimConfig::validate() const {
  if (n < 2) throw SizeError("simulator: the particle system needs N >= 2");
  if (dim == 0) throw DimError("simulator: dimension must be positive");
  if (horizon > 0.0 && dt > horizon + time_tol(horizon)) throw ParamError("simulator: dt exceeds the horizon");
  (void)checkpoint_steps();
}

DriverNoise draw_noise(std::uint64_t seed, std::uint64_t job, std::size_t n, std::size_t dim, std::uint64_t step,
                       double dt, const std::optional<DiscreteLevyMeasure>& base, bool exact_compound_poisson) {
  DriverNoise noise;
  noise.n = n;
  noise.dim = dim;
  noise.dt = dt;
  noise.brownian.assign(n * dim, 0.0);
  noise.jump_sum.assign(n * dim, 0.0);
  noise.events.assign(n, {});
  const double sq = std::sqrt(dt);
  const double t0 = static_cast<double>(step) * dt;
  const bool jumps = base && !base->empty();
  for (std::size_t i = 0; i < n; ++i) {
    Stream s(seed, job, i, step);
    for (std::size_t k = 0; k < dim; ++k) noise.brownian[i * dim + k] = sq * s.normal();
    if (!jumps) continue;
    for (std::size_t a = 0; a < base->size(); ++a) {
      const auto& atom = base->atom(a);
      std::uint64_t count = 0;
      if (exact_compound_poisson) {
        count = s.poisson(atom.lambda * dt);
      } else {
        count = s.uniform() < atom.lambda * dt ? 1 : 0;
      }
      for (std::uint64_t e = 0; e < count; ++e) {
        noise.events[i].push_back({t0 + dt * s.uniform(), a});
        for (std::size_t k = 0; k < dim; ++k) noise.jump_sum[i * dim + k] += atom.z(static_cast<Eigen::Index>(k));
      }
    }
    std::sort(noise.events[i].begin(), noise.events[i].end(),
              [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  }
  return noise;
}

void apply_increment(MutPoint x, const CoefficientTuple& tau, double dt, ConstPoint db, ConstPoint dz,
                     const Vec& compensator) {
  x += tau.b * dt + tau.sigma * db;
  if (compensator.size() > 0 && (dz.squaredNorm() > 0.0 || compensator.squaredNorm() > 0.0)) {
    x += tau.eta * (dz - compensator * dt);
  }
}

void check_finite(const PointCloud& x, std::size_t step, double time) {
  for (double c : x.coords()) {
    if (!std::isfinite(c) || std::abs(c) > 1e100) {
      throw DivergenceError("simulator: state diverged at step " + std::to_string(step) + " (t = " +
                                std::to_string(time) + ")",
                            step, time);
    }
  }
}

ParticleState step(const ParticleState& state, const MeanFieldModel& model, double dt, const DriverNoise& noise) {
  const PointCloud& x = state.positions;
  if (noise.n != x.size() || noise.dim != x.dim()) throw SizeError("simulator: noise does not match the state");
  if (x.dim() != model.dim()) throw DimError("simulator: state dimension differs from the model");
  const BoundMeasure bound(model, x);
  const Vec comp = compensator_of(model);
  ParticleState next{state.t + dt, x, std::nullopt};
  for_particles(x.size(), [&](std::size_t i) {
    apply_increment(next.positions.point(i), bound.leave_one_out(i), dt, noise.db(i), noise.dz(i), comp);
  });
  return next;
}

void step_frozen(PointCloud& x, const MeanFieldModel& model, const PointCloud& mu, double dt,
                 const DriverNoise& noise) {
  if (noise.n != x.size() || noise.dim != x.dim()) throw SizeError("simulator: noise does not match the state");
  const BoundMeasure bound(model, mu);
  const Vec comp = compensator_of(model);
  for_particles(x.size(), [&](std::size_t i) {
    const Vec xi = x.point(i);
    apply_increment(x.point(i), bound.at(xi), dt, noise.db(i), noise.dz(i), comp);
  });
}

std::vector<Checkpoint> simulate(const SimConfig& config, const MeanFieldModel& model, const PointCloud& initial) {
  config.validate();
  if (initial.size() != config.n) {
    throw SizeError("simulator: initial cloud has " + std::to_string(initial.size()) + " points, expected " +
                    std::to_string(config.n));
  }
  if (initial.dim() != config.dim || model.dim() != config.dim) throw DimError("simulator: dimension mismatch");
  const std::size_t steps = config.step_count();
  const auto cps = config.checkpoint_steps();

  std::vector<Checkpoint> out;
  ParticleState state{0.0, initial, std::nullopt};
  std::size_t next_cp = 0;
  for (std::size_t s = 0;; ++s) {
    if (next_cp < cps.size() && cps[next_cp] == s) {
      state.t = static_cast<double>(s) * config.dt;
      out.push_back({state.t, state});
      ++next_cp;
    }
    if (s == steps) break;
    const auto noise = draw_noise(config.seed, config.job, config.n, config.dim, s, config.dt, model.base_jump(),
                                  config.exact_compound_poisson);
    state = step(state, model, config.dt, noise);
    check_finite(state.positions, s + 1, static_cast<double>(s + 1) * config.dt);
  }
  return out;
}

std::vector<PairCheckpoint> simulate_synchronous_pair(const SimConfig& config, const MeanFieldModel& model,
                                                      const MeasureCurve& mf_curve, const PointCloud& initial) {
  config.validate();
  if (initial.size() != config.n) throw SizeError("simulator: initial cloud size differs from N");
  if (initial.dim() != config.dim || model.dim() != config.dim) throw DimError("simulator: dimension mismatch");
  const std::size_t steps = config.step_count();
  mf_curve.require_covers(0.0, config.horizon);
  const auto cps = config.checkpoint_steps();
  const Vec comp = compensator_of(model);

  std::vector<PairCheckpoint> out;
  ParticleState state{0.0, initial, initial};
  std::size_t next_cp = 0;
  std::size_t bound_index = static_cast<std::size_t>(-1);
  std::optional<BoundMeasure> mf_bound;
  for (std::size_t s = 0;; ++s) {
    const double t = static_cast<double>(s) * config.dt;
    if (next_cp < cps.size() && cps[next_cp] == s) {
      state.t = t;
      out.push_back({t, state, tensorized_cost(state.positions, *state.coupled)});
      ++next_cp;
    }
    if (s == steps) break;
    const auto noise = draw_noise(config.seed, config.job, config.n, config.dim, s, config.dt, model.base_jump(),
                                  config.exact_compound_poisson);
    const std::size_t idx = mf_curve.index_at(t);
    if (idx != bound_index) {
      mf_bound.emplace(model, mf_curve.cloud(idx));
      bound_index = idx;
    }
    ParticleState next = step(state, model, config.dt, noise);
    PointCloud partner = *state.coupled;
    for_particles(config.n, [&](std::size_t i) {
      const Vec xi = state.coupled->point(i);
      apply_increment(partner.point(i), mf_bound->at(xi), config.dt, noise.db(i), noise.dz(i), comp);
    });
    next.coupled = std::move(partner);
    state = std::move(next);
    check_finite(state.positions, s + 1, t + config.dt);
    check_finite(*state.coupled, s + 1, t + config.dt);
  }
  return out;
}

PointCloud truncated_empirical(const ParticleState& state, std::size_t k) {
  const PointCloud& x = state.positions;
  if (x.size() < 2) throw SizeError("simulator: the truncated empirical measure needs N >= 2");
  if (k >= x.size()) throw SizeError("simulator: particle index out of range");
  std::vector<double> coords;
  coords.reserve((x.size() - 1) * x.dim());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == k) continue;
    const auto p = x.point(j);
    coords.insert(coords.end(), p.data(), p.data() + p.size());
  }
  return PointCloud(x.dim(), std::move(coords));
}

}  // namespace mfchaos
