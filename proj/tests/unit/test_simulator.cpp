#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/kernels.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/parallel.hpp"
#include "mfchaos/simulator.hpp"

using namespace mfchaos;

namespace {

SimConfig config(std::size_t n, std::size_t d, double t, double dt, std::uint64_t seed = 1) {
  SimConfig c;
  c.n = n;
  c.dim = d;
  c.horizon = t;
  c.dt = dt;
  c.seed = seed;
  return c;
}

MeanFieldModel attraction(std::size_t d, double kappa, double s) {
  return MeanFieldModel(d, AverageForm{kernels::linear_attraction(kappa), kernels::constant_sigma(d, s), kernels::zero_matrix(d)});
}

}  // namespace

TEST(SimConfig, GridValidation) {
  auto c = config(4, 1, 1.0, 0.3);
  EXPECT_THROW(c.validate(), ParamError);
  c.dt = 0.25;
  c.checkpoints = {0.3};
  EXPECT_THROW(c.validate(), ParamError);
  c.checkpoints = {1.5};
  EXPECT_THROW(c.validate(), ParamError);
  c.checkpoints = {0.75, 0.25};
  EXPECT_EQ(c.checkpoint_steps(), (std::vector<std::size_t>{1, 3}));
  c.checkpoints.clear();
  EXPECT_EQ(c.checkpoint_steps(), (std::vector<std::size_t>{0, 4}));
  c.n = 1;
  EXPECT_THROW(c.validate(), SizeError);
}

TEST(Simulate, OrnsteinUhlenbeckVariance) {
  // dX = -theta X dt + s dB from 0: Var X_T = s^2 (1 - e^{-2 theta T}) / (2 theta)
  const double theta = 1.0, s = 0.5, t = 1.0;
  const MeanFieldModel m(1, kernels::ou(1, theta, s));
  const auto out = simulate(config(20000, 1, t, 1e-3), m, PointCloud::zeros(1, 20000));
  const auto& x = out.back().state.positions;
  const double var = x.covariance()(0, 0);
  const double expect = s * s * (1.0 - std::exp(-2.0 * theta * t)) / (2.0 * theta);
  EXPECT_NEAR(var / expect, 1.0, 0.03);
  EXPECT_NEAR(x.mean()[0], 0.0, 5.0 * std::sqrt(expect / 20000.0));
}

TEST(Simulate, CompensatedJumpsHaveZeroMeanDrift) {
  // pure compensated compound Poisson: E X_T = X_0 and Var X_T = T m2(Omega) eta0^2
  const DiscreteLevyMeasure om(1, {{Vec::Constant(1, 0.5), 2.0}, {Vec::Constant(1, -1.0), 0.5}});
  for (bool exact : {true, false}) {
    const MeanFieldModel m(1, kernels::ou(1, 0.0, 0.0, 1.0), om);
    auto c = config(20000, 1, 1.0, 1e-3, 5);
    c.exact_compound_poisson = exact;
    const auto out = simulate(c, m, PointCloud::zeros(1, 20000));
    const auto& x = out.back().state.positions;
    const double v = om.second_moment();
    EXPECT_NEAR(x.mean()[0], 0.0, 5.0 * std::sqrt(v / 20000.0));
    EXPECT_NEAR(x.covariance()(0, 0) / v, 1.0, 0.05);
  }
}

TEST(Simulate, MeanConservedWithoutNoise) {
  std::mt19937_64 g(51);
  const auto m = attraction(2, 1.5, 0.0);
  const auto x0 = gen::cloud(g, 2, 50);
  const auto out = simulate(config(50, 2, 1.0, 1e-2), m, x0);
  EXPECT_LT((out.back().state.positions.mean() - x0.mean()).norm(), 1e-12);
  // and the spread contracts
  EXPECT_LT(out.back().state.positions.covariance().trace(), x0.covariance().trace());
}

TEST(Simulate, DeterministicAcrossRunsAndThreadCounts) {
  std::mt19937_64 g(52);
  const DiscreteLevyMeasure om(1, {{Vec::Constant(1, 0.3), 1.0}});
  const MeanFieldModel m(1, AverageForm{kernels::linear_attraction(1.0), kernels::constant_sigma(1, 0.5), kernels::linear_eta(1, 1.0, 0.0)}, om);
  const auto x0 = gen::cloud(g, 1, 5000);
  set_thread_count(1);
  const auto a = simulate(config(5000, 1, 0.05, 1e-2, 9), m, x0);
  set_thread_count(3);
  const auto b = simulate(config(5000, 1, 0.05, 1e-2, 9), m, x0);
  set_thread_count(0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(a[k].state.positions == b[k].state.positions);
  const auto c = simulate(config(5000, 1, 0.05, 1e-2, 10), m, x0);
  EXPECT_FALSE(a.back().state.positions == c.back().state.positions);
}

TEST(Simulate, PermutationEquivariantWhenNoiseFree) {
  std::mt19937_64 g(53);
  const auto m = attraction(2, 0.8, 0.0);
  const auto x0 = gen::cloud(g, 2, 30);
  const auto perm = gen::permutation(g, 30);
  const auto a = simulate(config(30, 2, 0.5, 1e-2), m, x0).back().state.positions;
  const auto b = simulate(config(30, 2, 0.5, 1e-2), m, gen::permuted(x0, perm)).back().state.positions;
  for (std::size_t i = 0; i < 30; ++i) EXPECT_LT((b.point(i) - a.point(perm[i])).norm(), 1e-12);
}

TEST(Simulate, DivergenceIsReported) {
  const MeanFieldModel m(1, kernels::ou(1, -1000.0, 0.0));
  try {
    simulate(config(2, 1, 100.0, 0.1), m, PointCloud(1, {1.0, 2.0}));
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_GT(e.time(), 0.0);
  }
}

TEST(Simulate, FrozenStepIgnoresOtherParticles) {
  // step_frozen uses the given measure, so particles evolve independently
  const auto m = attraction(1, 1.0, 0.0);
  PointCloud x(1, {0.0, 10.0});
  const PointCloud mu(1, {1.0});
  const auto noise = draw_noise(1, 0, 2, 1, 0, 0.1, std::nullopt, true);
  step_frozen(x, m, mu, 0.1, noise);
  EXPECT_NEAR(x.point(0)[0], 0.1, 1e-15);
  EXPECT_NEAR(x.point(1)[0], 10.0 - 0.9, 1e-14);
}

TEST(SynchronousPair, StartsAtZeroAndStaysThereWithoutInteraction) {
  std::mt19937_64 g(54);
  const MeanFieldModel m(1, kernels::ou(1, 1.0, 0.5));
  const auto x0 = gen::cloud(g, 1, 40);
  auto c = config(40, 1, 1.0, 1e-2);
  c.checkpoints = {0.0, 0.5, 1.0};
  const auto curve = MeasureCurve::constant({0.0, 1.0}, x0);
  const auto out = simulate_synchronous_pair(c, m, curve, x0);
  ASSERT_EQ(out.size(), 3u);
  for (const auto& p : out) EXPECT_EQ(p.mean_cost, 0.0);
}

TEST(SynchronousPair, InteractingCostIsPositiveAndMatchesTensorizedCost) {
  std::mt19937_64 g(55);
  const auto m = attraction(1, 1.0, 0.5);
  const auto x0 = gen::cloud(g, 1, 16);
  const auto curve = MeasureCurve::constant({0.0, 0.5, 1.0}, gen::cloud(g, 1, 200));
  const auto out = simulate_synchronous_pair(config(16, 1, 1.0, 1e-2), m, curve, x0);
  EXPECT_EQ(out.front().mean_cost, 0.0);
  EXPECT_GT(out.back().mean_cost, 0.0);
  EXPECT_DOUBLE_EQ(out.back().mean_cost, tensorized_cost(out.back().state.positions, *out.back().state.coupled));
}

TEST(TruncatedEmpirical, DropsOneParticle) {
  ParticleState s{0.0, PointCloud(1, {1.0, 2.0, 3.0}), std::nullopt};
  EXPECT_TRUE(truncated_empirical(s, 1) == PointCloud(1, {1.0, 3.0}));
  EXPECT_THROW(truncated_empirical(s, 3), SizeError);
}
