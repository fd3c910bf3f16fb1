#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "generators.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/io.hpp"
#include "mfchaos/kernels.hpp"

using namespace mfchaos;
using io::json;

TEST(CloudCsv, RoundTripIsBitwise) {
  std::mt19937_64 g(81);
  for (std::size_t d : {1u, 2u, 5u}) {
    auto c = gen::cloud(g, d, 37, 1e3);
    c.point(0)[0] = std::numeric_limits<double>::denorm_min();
    c.point(1)[0] = -0.1;
    std::stringstream ss;
    io::write_cloud_csv(ss, c);
    EXPECT_TRUE(io::read_cloud_csv(ss) == c);
  }
}

TEST(CloudCsv, RejectsMalformedInput) {
  std::stringstream bad_header("a,b\n1,2\n");
  EXPECT_THROW(io::read_cloud_csv(bad_header), ParamError);
  std::stringstream ragged("x0,x1\n1,2\n3\n");
  EXPECT_THROW(io::read_cloud_csv(ragged), DimError);
  std::stringstream empty("x0\n");
  EXPECT_THROW(io::read_cloud_csv(empty), EmptyMeasureError);
  std::stringstream junk("x0\n1.5abc\n");
  EXPECT_THROW(io::read_cloud_csv(junk), ParamError);
  std::stringstream crlf("x0,x1\r\n1,2\r\n");
  EXPECT_TRUE(io::read_cloud_csv(crlf) == PointCloud(2, {1.0, 2.0}));
}

TEST(Json, CloudAndMatrixRoundTrip) {
  std::mt19937_64 g(82);
  const auto c = gen::cloud(g, 3, 10);
  EXPECT_TRUE(io::cloud_from_json(io::cloud_to_json(c)) == c);
  const Mat m = gen::mat(g, 3);
  EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(m)), m);
  EXPECT_THROW(io::cloud_from_json(json::array({{1.0}, {1.0, 2.0}})), DimError);
}

TEST(Json, TripletRoundTrip) {
  std::mt19937_64 g(83);
  LevyTriplet t{gen::vec(g, 2), gen::mat(g, 2), JumpPart{gen::mat(g, 2), gen::levy(g, 2, 3)}};
  const auto back = io::triplet_from_json(io::triplet_to_json(t));
  EXPECT_EQ(back.b, t.b);
  EXPECT_EQ(back.sigma, t.sigma);
  ASSERT_TRUE(back.jump);
  EXPECT_EQ(back.jump->eta, t.jump->eta);
  EXPECT_TRUE(back.jump->base == t.jump->base);
  auto j = io::triplet_to_json(t);
  j["extra"] = 1;
  EXPECT_THROW(io::triplet_from_json(j), UnknownKey);
  j.erase("extra");
  j.erase("sigma");
  EXPECT_THROW(io::triplet_from_json(j), MissingField);
}

TEST(Json, ModelsFromDescriptions) {
  const auto avg = io::model_from_json(json::parse(R"({
    "kind": "average_form", "id": "attr", "dim": 2,
    "drift": {"name": "linear_attraction", "kappa": 1.5},
    "sigma": {"name": "constant_sigma", "s": 0.3},
    "eta": {"name": "linear_eta", "eta0": 1.0, "eta1": 0.2},
    "jump": {"atoms": [{"z": [0.5, 0.0], "lambda": 1.0}]}
  })"));
  EXPECT_TRUE(avg.is_average_form());
  EXPECT_EQ(avg.id(), "attr");
  EXPECT_TRUE(avg.has_jumps());
  ASSERT_TRUE(avg.lipschitz());
  const auto lp = kernels::average_form_constants(1.5, 0.2);
  EXPECT_EQ(avg.lipschitz()->alpha, lp.alpha);
  EXPECT_EQ(avg.lipschitz()->beta, lp.beta);

  const auto ou = io::model_from_json(json::parse(R"({"kind": "general", "builtin": "ou", "dim": 1, "theta": 2.0, "s": 0.5})"));
  EXPECT_FALSE(ou.is_average_form());
  EXPECT_EQ(ou.dependence(), MeasureDependence::None);
  EXPECT_EQ(ou.lipschitz()->beta, 4.0);

  const auto declared = io::model_from_json(json::parse(
      R"({"kind": "general", "builtin": "mean_ramp", "dim": 1, "lipschitz": {"alpha": 1.0, "beta": 2.0}})"));
  EXPECT_EQ(declared.lipschitz()->alpha, 1.0);
  EXPECT_FALSE(io::model_from_json(json::parse(R"({"kind": "general", "builtin": "mean_ramp", "dim": 1})")).lipschitz());
}

TEST(Json, ModelErrorsNameTheKey) {
  try {
    io::model_from_json(json::parse(R"({"kind": "general", "builtin": "zero", "dim": 1, "foo": 1})"));
    FAIL();
  } catch (const UnknownKey& e) {
    EXPECT_EQ(e.field(), "foo");
  }
  try {
    io::model_from_json(json::parse(R"({"kind": "average_form", "dim": 1, "drift": {"name": "linear_attraction"}})"));
    FAIL();
  } catch (const MissingField& e) {
    EXPECT_EQ(e.field(), "drift.kappa");
  }
  EXPECT_THROW(io::model_from_json(json::parse(R"({"kind": "other", "dim": 1})")), RangeError);
  EXPECT_THROW(io::model_from_json(json::parse(R"({"kind": "general", "dim": 1, "builtin": "ou", "theta": "x"})")),
               RangeError);
  EXPECT_THROW(io::model_from_json(json::parse(R"({"kind": "general", "dim": 0, "builtin": "zero"})")), RangeError);
}

TEST(Json, FormatDoubleRoundTrips) {
  std::mt19937_64 g(84);
  for (int rep = 0; rep < 1000; ++rep) {
    const double v = gen::normal(g, 1e6) * std::pow(10.0, gen::uniform(g, -30.0, 30.0));
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

TEST(Json, ChaosCsvHeader) {
  ChaosReport r;
  r.points.push_back({8, 0.5, 0.25, 0.01, 0.1, 0.001, 0.3, false});
  std::stringstream ss;
  io::write_chaos_csv(ss, r);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header, "N,t,distance,stderr,aleph,aleph_stderr,bound,verdict");
  EXPECT_EQ(row.substr(0, 4), "8,0.");
  EXPECT_EQ(row.substr(row.size() - 4), "fail");
  EXPECT_EQ(io::to_json(r)["bound_kind"], "upper_bound_surrogate");
}
