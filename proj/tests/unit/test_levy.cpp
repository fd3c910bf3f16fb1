#include <gtest/gtest.h>

#include "generators.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/levy.hpp"
#include "mfchaos/ot.hpp"

using namespace mfchaos;

namespace {

Mat m1(double v) { return Mat::Constant(1, 1, v); }
Vec v1(double v) { return Vec::Constant(1, v); }

}  // namespace

TEST(LevyMeasure, MomentsAndValidation) {
  const DiscreteLevyMeasure m(1, {{v1(2.0), 3.0}, {v1(-1.0), 0.5}});
  EXPECT_DOUBLE_EQ(m.total_intensity(), 3.5);
  EXPECT_DOUBLE_EQ(m.first_moment()[0], 6.0 - 0.5);
  EXPECT_DOUBLE_EQ(m.second_moment(), 12.0 + 0.5);
  EXPECT_THROW(DiscreteLevyMeasure(1, {{v1(0.0), 1.0}}), ParamError);
  EXPECT_THROW(DiscreteLevyMeasure(1, {{v1(1.0), 0.0}}), ParamError);
  EXPECT_THROW(DiscreteLevyMeasure(2, {{v1(1.0), 1.0}}), DimError);
}

TEST(LevyMeasure, PushforwardDropsAtomsSentToOrigin) {
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 2.0;
  Vec z1(2), z2(2);
  z1 << 1.0, 0.0;
  z2 << 0.0, 1.0;
  const auto pf = DiscreteLevyMeasure(2, {{z1, 1.0}, {z2, 2.0}}).pushforward(p);
  ASSERT_EQ(pf.size(), 1u);
  EXPECT_DOUBLE_EQ(pf.atom(0).z[0], 2.0);
}

TEST(PushforwardCost, HandValues) {
  const DiscreteLevyMeasure om(1, {{v1(2.0), 3.0}});
  EXPECT_DOUBLE_EQ(levy_pushforward_cost(m1(1.0), m1(0.0), om), 6.0);
  EXPECT_DOUBLE_EQ(levy_pushforward_cost(m1(0.7), m1(0.7), om), 0.0);
  // equality with the Frobenius bound in d = 1
  EXPECT_NEAR(levy_pushforward_cost(m1(1.5), m1(0.25), om), 0.5 * 1.25 * 1.25 * om.second_moment(), 1e-12);
}

TEST(PushforwardCost, FrobeniusBoundOnRandomInstances) {
  std::mt19937_64 g(31);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = gen::integer(g, 1, 4);
    const auto om = gen::levy(g, d, gen::integer(g, 1, 5));
    const Mat s = gen::mat(g, d), t = gen::mat(g, d);
    EXPECT_LE(levy_pushforward_cost(s, t, om), 0.5 * (s - t).squaredNorm() * om.second_moment() * (1 + 1e-12));
  }
}

TEST(TrivialCoupling, HandValues) {
  const DiscreteLevyMeasure empty(1);
  EXPECT_DOUBLE_EQ(trivial_coupling_cost(empty, empty), 0.0);
  EXPECT_DOUBLE_EQ(trivial_coupling_cost(DiscreteLevyMeasure(1, {{v1(1.0), 2.0}}), empty), 1.0);
}

TEST(TrivialCoupling, DominatesPushforwardWhenImagesShareOrientation) {
  // For eta, eta~ with eta^T eta~ positive semidefinite,
  // |eta z - eta~ z|^2 <= |eta z|^2 + |eta~ z|^2, so the pushforward coupling wins.
  std::mt19937_64 g(32);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3);
    const auto om = gen::levy(g, d, gen::integer(g, 1, 4));
    const Mat s = gen::spd(g, d);
    const Mat eta = s, eta_t = gen::uniform(g, 0.1, 2.0) * s;  // eta^T eta~ = c s^2 >= 0
    EXPECT_GE(trivial_coupling_cost(om.pushforward(eta), om.pushforward(eta_t)),
              levy_pushforward_cost(eta, eta_t, om) - 1e-12);
  }
}

TEST(TrivialCoupling, IsCheaperWhenImagesOppose) {
  // eta~ = -eta: pushforward cost is 2 m2 while the trivial coupling costs m2,
  // so "trivial >= pushforward" does not hold in general.
  const DiscreteLevyMeasure om(1, {{v1(1.0), 1.0}});
  const double push = levy_pushforward_cost(m1(1.0), m1(-1.0), om);
  const double triv = trivial_coupling_cost(om.pushforward(m1(1.0)), om.pushforward(m1(-1.0)));
  EXPECT_DOUBLE_EQ(push, 2.0);
  EXPECT_DOUBLE_EQ(triv, 1.0);
  LevyTriplet a{v1(0.0), m1(0.0), JumpPart{m1(1.0), om}};
  LevyTriplet b{v1(0.0), m1(0.0), JumpPart{m1(-1.0), om}};
  EXPECT_DOUBLE_EQ(levy_coupling_bound(a, b), 1.0);
}

TEST(GeneratorMetric, HandCases) {
  Vec b(2), zero = Vec::Zero(2);
  b << 1.0, 0.0;
  const Mat i2 = Mat::Identity(2, 2);
  EXPECT_NEAR(generator_metric_wg_sq({b, i2, {}}, {zero, i2, {}}), 0.5, 1e-12);
  EXPECT_NEAR(generator_metric_wg_sq({v1(0.0), m1(1.0), {}}, {v1(0.0), m1(2.0), {}}), 0.5, 1e-12);
  const DiscreteLevyMeasure om(1, {{v1(0.5), 2.0}});
  const LevyTriplet t{v1(0.3), m1(0.4), JumpPart{m1(1.2), om}};
  EXPECT_NEAR(generator_metric_wg(t, t), 0.0, 1e-12);
}

TEST(GeneratorMetric, DecomposesIntoItsThreeTerms) {
  std::mt19937_64 g(33);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3);
    const auto om = gen::levy(g, d, 2);
    const LevyTriplet a{gen::vec(g, d), gen::mat(g, d), JumpPart{gen::mat(g, d), om}};
    const LevyTriplet b{gen::vec(g, d), gen::mat(g, d), JumpPart{gen::mat(g, d), om}};
    const double jump = std::min(levy_pushforward_cost(a.jump->eta, b.jump->eta, om),
                                 trivial_coupling_cost(a.jump_measure(), b.jump_measure()));
    const double expect = 0.5 * (a.b - b.b).squaredNorm() + bures_wasserstein_sq(a.diffusion(), b.diffusion()) + jump;
    EXPECT_NEAR(generator_metric_wg_sq(a, b), expect, 1e-9);
    EXPECT_NEAR(generator_metric_wg(a, b), std::sqrt(expect), 1e-9);
  }
}

TEST(Triplet, Validation) {
  LevyTriplet t{Vec::Zero(2), Mat::Identity(3, 3), {}};
  EXPECT_THROW(t.validate(), DimError);
}
