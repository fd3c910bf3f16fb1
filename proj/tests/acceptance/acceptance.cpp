// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/generators.hpp"
#include "mfchaos/chaos.hpp"
#include "mfchaos/commands.hpp"
#include "mfchaos/io.hpp"
#include "mfchaos/kernels.hpp"
#include "mfchaos/mf_solver.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/rng.hpp"

using namespace mfchaos;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

PointCloud sample_gaussian(std::mt19937_64& g, const Vec& mean, const Mat& cov, std::size_t m) {
  const Mat l = Eigen::LLT<Mat>(cov).matrixL();
  std::vector<double> coords;
  coords.reserve(m * static_cast<std::size_t>(mean.size()));
  for (std::size_t i = 0; i < m; ++i) {
    const Vec p = mean + l * gen::vec(g, static_cast<std::size_t>(mean.size()));
    coords.insert(coords.end(), p.data(), p.data() + p.size());
  }
  return PointCloud(static_cast<std::size_t>(mean.size()), std::move(coords));
}

std::pair<Vec, Mat> sample_moments(const PointCloud& c) {
  const auto d = static_cast<Eigen::Index>(c.dim());
  Vec m = Vec::Zero(d);
  for (std::size_t i = 0; i < c.size(); ++i) m += c.point(i);
  m /= static_cast<double>(c.size());
  Mat s = Mat::Zero(d, d);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec z = c.point(i) - m;
    s += z * z.transpose();
  }
  return {m, s / static_cast<double>(c.size())};
}

PointCloud normal_cloud(std::size_t m, double sd, std::uint64_t seed) {
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = sd * Stream(seed, 0x61636370, i, 0).normal();
  return PointCloud(1, std::move(c));
}

Outcome ot_oracle() {
  std::mt19937_64 g(1001);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3), m = gen::integer(g, 1, 7);
    const auto a = gen::cloud(g, d, m), b = gen::cloud(g, d, m, 1.5);
    const double lap = exact_w2_assignment(a, b).cost;
    const double lp = bruteforce_ot(WeightedCloud::uniform(a), WeightedCloud::uniform(b)).cost;
    worst = std::max(worst, std::abs(lap - lp));
  }
  return {worst <= 1e-12, fmt("200 instances, max |assignment - simplex| = %.2e", worst)};
}

Outcome gaussian_closed_form() {
  std::mt19937_64 g(1002);
  double worst = 0.0, plug_worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3);
    const Mat a = gen::spd(g, d), b = gen::spd(g, d);
    const Vec x0 = gen::vec(g, d, 2.0), y0 = gen::vec(g, d, 2.0);
    const auto mu = sample_gaussian(g, x0, a, 2000), nu = sample_gaussian(g, y0, b, 2000);
    const double exact = gaussian_w2(x0, a, y0, b);
    const double emp = exact_w2_assignment(mu, nu).cost;
    worst = std::max(worst, std::abs(emp - exact) / exact);
    // same formula at the sample moments: separates solver error from sampling noise
    const auto [ma, sa] = sample_moments(mu);
    const auto [mb, sb] = sample_moments(nu);
    const double plug = gaussian_w2(ma, sa, mb, sb);
    plug_worst = std::max(plug_worst, std::abs(emp - plug) / plug);
  }
  return {worst <= 0.05, fmt("10 instances at M = 2000, max relative error %.4f (limit 0.05); "
                             "vs closed form at sample moments %.4f",
                             worst, plug_worst)};
}

Outcome bures_hand_cases() {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a.diagonal() << 1.0, 4.0;
  b.diagonal() << 4.0, 1.0;
  const double e1 = std::abs(bures_wasserstein(a, b) - 1.0);
  double e2 = 0.0;
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    for (auto [s, t] : {std::pair{1.0, 2.0}, std::pair{0.3, 1.7}, std::pair{2.5, 0.5}}) {
      const Mat id = Mat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const double expect = 0.5 * static_cast<double>(d) * (s - t) * (s - t);
      e2 = std::max(e2, std::abs(bures_wasserstein_sq(s * s * id, t * t * id) - expect));
    }
  }
  return {e1 <= 1e-10 && e2 <= 1e-10, fmt("diag case error %.2e, scalar cases max error %.2e", e1, e2)};
}

Outcome zeta_checks() {
  double worst = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 10.0 * k / 1000.0;
    worst = std::max(worst, std::abs(zeta(1e-8, t) - t));
  }
  const double e = std::abs(zeta(std::numbers::ln2, 1.0) - 1.0 / std::numbers::ln2);
  return {worst < 1e-6 && e <= 1e-12, fmt("max |zeta_1e-8(t) - t| = %.2e on [0,10], |zeta_ln2(1) - 1/ln2| = %.2e", worst, e)};
}

Outcome ou_moments() {
  // b(x, mu) = -(x - mean(mu)): the mean is a conserved quantity and Var_T = V0 e^{-2T} + s^2/2 (1 - e^{-2T})
  const std::size_t m = 10000;
  SolverConfig cfg;
  cfg.m = m;
  cfg.dt = 1e-3;
  cfg.mesh = 0.01;
  cfg.seed = 5;
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = 1.0 + 2.0 * Stream(17, 0, i, 0).normal();
  const PointCloud rho0(1, c);
  const double v0 = rho0.covariance()(0, 0), s = 0.8;

  const MeanFieldModel quiet(1, kernels::mean_attraction(1, 1.0, 0.0), {}, LipschitzParams{2.0, 2.0, 0.0, 0.0});
  const auto det = solve_mean_field(quiet, rho0, 1.0, cfg);
  double drift = 0.0;
  for (const auto& cl : det.curve.clouds()) drift = std::max(drift, std::abs(cl.mean()[0] - rho0.mean()[0]));

  const MeanFieldModel noisy(1, kernels::mean_attraction(1, 1.0, s), {}, LipschitzParams{2.0, 2.0, 0.0, 0.0});
  const auto sol = solve_mean_field(noisy, rho0, 1.0, cfg);
  const double var = sol.curve.clouds().back().covariance()(0, 0);
  const double expect = v0 * std::exp(-2.0) + 0.5 * s * s * (1.0 - std::exp(-2.0));
  const double rel = std::abs(var / expect - 1.0);
  return {drift <= 1e-10 && rel <= 0.05,
          fmt("noise-free mean drift %.2e; Var_T %.4f vs %.4f (relative %.4f, limit 0.05)", drift, var, expect, rel)};
}

Outcome pca_cauchy() {
  // drift -(1 + t) x from the ramp model driven by the curve delta_t
  const double horizon = 1.0, dt = 1.0 / 2048.0;
  const MeanFieldModel model(1, kernels::mean_ramp(1, 0.5));
  std::vector<double> times;
  std::vector<PointCloud> deltas;
  for (std::size_t k = 0; k <= 2048; ++k) {
    times.push_back(k * dt);
    deltas.push_back(PointCloud(1, {k * dt}));
  }
  const MeasureCurve delta(times, deltas);
  SolverConfig cfg;
  cfg.m = 2000;
  cfg.dt = dt;
  cfg.seed = 6;
  const auto rows = pca_refinement_study(model, delta, normal_cloud(2000, 1.0, 6), horizon,
                                         {horizon / 4, horizon / 8, horizon / 16, horizon / 32}, cfg);
  bool ok = true;
  std::string detail = "successive sup C2:";
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    detail += fmt(" %.3e", rows[k].distance_to_next);
    if (k > 0) {
      const double ratio = rows[k].distance_to_next / rows[k - 1].distance_to_next;
      ok = ok && rows[k].distance_to_next < rows[k - 1].distance_to_next && ratio <= 0.75;
      detail += fmt(" (ratio %.3f)", ratio);
    }
  }
  return {ok, detail};
}

Outcome linearized_stability() {
  std::mt19937_64 g(1007);
  std::size_t passed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = gen::integer(g, 1, 2);
    const double kappa = gen::uniform(g, 0.2, 2.0), eta1 = gen::uniform(g, 0.0, 0.5), s = gen::uniform(g, 0.1, 1.0);
    std::optional<DiscreteLevyMeasure> jumps;
    if (rep % 2) jumps = gen::levy(g, d, 2);
    const auto lp = kernels::average_form_constants(kappa, eta1);
    const MeanFieldModel model(d, AverageForm{kernels::linear_attraction(kappa), kernels::constant_sigma(d, s),
                                              kernels::linear_eta(d, gen::uniform(g, 0.2, 1.0), eta1)},
                               jumps, lp);
    const auto times = uniform_partition(1.0, 0.1);
    const auto mu = MeasureCurve::constant(times, gen::cloud(g, d, 60));
    const auto nu = MeasureCurve::constant(times, gen::cloud(g, d, 60, 1.5));
    SolverConfig cfg;
    cfg.m = 60;
    cfg.mesh = 0.1;
    cfg.dt = 0.01;
    cfg.seed = 100 + rep;
    const auto rep_ = stability_check(model, mu, nu, gen::cloud(g, d, 60), gen::cloud(g, d, 60, 2.0), lp.alpha,
                                      lp.beta, cfg, 8);
    passed += rep_.pass;
    for (const auto& row : rep_.rows) worst_margin = std::min(worst_margin, row.rhs + 3.0 * row.lhs_stderr - row.lhs);
  }
  return {passed == 20, fmt("%.0f/20 instances hold; smallest margin rhs + 3 se - lhs = %.3e", passed, worst_margin)};
}

LevyTriplet random_triplet(std::mt19937_64& g, std::size_t d, bool drift, bool diffusion, bool jumps) {
  LevyTriplet t{drift ? gen::vec(g, d) : Vec::Zero(static_cast<Eigen::Index>(d)),
                diffusion ? gen::mat(g, d) : Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)),
                std::nullopt};
  if (jumps) t.jump = JumpPart{gen::mat(g, d), gen::levy(g, d, 2)};
  return t;
}

Outcome omega_closed_forms() {
  std::mt19937_64 g(1008);
  int drift_ok = 0, diff_ok = 0, wg_ok = 0, wg_total = 0;
  double worst_drift = 0.0, worst_diff = 0.0;
  auto probe = [&](const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y, std::uint64_t seed) {
    const auto r = omega_probe(a, b, x, y, {0.04, 0.02, 0.01}, 20000, seed);
    ++wg_total;
    wg_ok += r.within_wg_bound;
    return r;
  };
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3);
    const auto a = random_triplet(g, d, true, false, false), b = random_triplet(g, d, true, false, false);
    const Vec x = gen::vec(g, d), y = gen::vec(g, d);
    const auto r = probe(a, b, x, y, 2000 + rep);
    drift_ok += r.matches_closed_form;
    worst_drift = std::max(worst_drift, std::abs(r.extrapolated - (a.b - b.b).dot(x - y)) / r.tolerance);
  }
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = gen::integer(g, 1, 3);
    const auto a = random_triplet(g, d, false, true, false), b = random_triplet(g, d, false, true, false);
    const Vec x = gen::vec(g, d);
    const auto r = probe(a, b, x, x, 3000 + rep);
    diff_ok += r.matches_closed_form;
    worst_diff = std::max(worst_diff, std::abs(r.extrapolated - bures_wasserstein_sq(a.diffusion(), b.diffusion())) / r.tolerance);
  }
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = gen::integer(g, 1, 2);
    const auto a = random_triplet(g, d, true, true, true), b = random_triplet(g, d, true, true, true);
    probe(a, b, gen::vec(g, d), gen::vec(g, d), 4000 + rep);
  }
  return {drift_ok == 10 && diff_ok == 10 && wg_ok == wg_total,
          fmt("drift %.0f/10, diffusion %.0f/10 within 3 se + 2 dt (worst |error|/tol %.2f); ", drift_ok, diff_ok,
              std::max(worst_drift, worst_diff)) +
              fmt("W_G bound held on %.0f/%.0f probes", wg_ok, wg_total)};
}

Outcome aleph_exactness() {
  bool ok = true;
  std::string detail;
  const PointCloud rademacher(1, {-1.0, 1.0});
  for (std::size_t n : {4u, 16u, 64u}) {
    const auto e = estimate_aleph(rademacher, {XiKind::FirstMomentSq, nullptr}, n, 40000, 9, n);
    const double expect = 1.0 / static_cast<double>(n - 1);
    ok = ok && std::abs(e.mean - expect) <= 3.0 * e.se;
    detail += fmt("N=%.0f %.5f vs %.5f; ", n, e.mean, expect);
  }
  const double kappa = 1.2, eta1 = 0.4;
  const MeanFieldModel m(1, AverageForm{kernels::linear_attraction(kappa), kernels::constant_sigma(1, 0.5),
                                        kernels::linear_eta(1, 1.0, eta1)});
  const auto rho = normal_cloud(300, 1.3, 10);
  for (std::size_t n : {4u, 16u, 64u}) {
    const auto e = estimate_aleph(rho, {XiKind::SigmaSq, &m}, n, 40000, 11, n);
    const double expect = (kappa * kappa + eta1 * eta1) * rho.covariance()(0, 0) / static_cast<double>(n - 1);
    ok = ok && std::abs(e.mean - expect) <= 3.0 * e.se;
    detail += fmt("SigmaSq N=%.0f %.5f vs %.5f; ", n, e.mean, expect);
  }
  return {ok, detail};
}

Outcome fournier_guillin() {
  FgConfig cfg;
  cfg.seed = 12;
  const auto rep = fg_bound_check(RhoFamily::Uniform, 1, 5.0, {10, 20, 40, 80, 160, 320, 640}, 2000, cfg);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) worst = std::max(worst, row.aleph / row.bound);
  return {rep.bound_holds, fmt("L = %.4f calibrated at N = 10; max aleph/bound over N = %.3f", rep.l_calibrated, worst)};
}

Outcome chaos_rate(bool with_jumps) {
  const double kappa = 1.0;
  std::optional<DiscreteLevyMeasure> jumps;
  if (with_jumps) jumps = DiscreteLevyMeasure(1, {{Vec::Constant(1, 0.5), 1.0}, {Vec::Constant(1, -0.3), 2.0}});
  const MeanFieldModel model(1, AverageForm{kernels::linear_attraction(kappa), kernels::constant_sigma(1, 0.5),
                                            with_jumps ? kernels::linear_eta(1, 1.0, 0.0) : kernels::zero_matrix(1)},
                             jumps, kernels::average_form_constants(kappa, 0.0), "attraction");
  PocConfig cfg;
  cfg.dt = 1e-3;
  cfg.checkpoint_every = 0.1;
  cfg.aleph_trials = 400;
  cfg.solver.m = 4000;
  cfg.solver.dt = 1e-3;
  cfg.solver.mesh = 0.01;
  cfg.solver.seed = 13;
  cfg.seed = 13;
  const auto rep = poc_rate_experiment(model, normal_cloud(4000, 1.0, 13), 1.0, {8, 16, 32, 64, 128, 256}, 100, cfg);
  return {rep.envelope_holds && rep.slope_ok && rep.verdict,
          fmt("slope %.3f (95%% CI %.3f, %.3f), band [-1.3, -0.7]; envelope ", rep.slope.slope, rep.slope.slope_lo,
              rep.slope.slope_hi) +
              (rep.envelope_holds ? "holds" : "violated") + " at every N above the calibration point"};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "mfchaos_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  io::write_json_file(root / "model.json", io::json::parse(R"({
    "kind": "average_form", "id": "attraction", "dim": 1,
    "drift": {"name": "linear_attraction", "kappa": 1.0},
    "sigma": {"name": "constant_sigma", "s": 0.5},
    "eta": {"name": "linear_eta", "eta0": 1.0},
    "jump": {"atoms": [{"z": [0.5], "lambda": 1.0}, {"z": [-0.3], "lambda": 2.0}]}
  })"));
  std::mt19937_64 g(1012);
  io::save_cloud_csv(root / "a.csv", gen::cloud(g, 2, 50));
  io::save_cloud_csv(root / "b.csv", gen::cloud(g, 2, 50));
  const std::string model = (root / "model.json").string();
  const io::json triplet = io::json::parse(
      R"({"b": [0.5], "sigma": [[1.0]], "jump": {"eta": [[1.0]], "base": {"atoms": [{"z": [0.4], "lambda": 1.5}]}}})");
  const std::vector<std::pair<std::string, io::json>> runs{
      {"ot", {{"a", (root / "a.csv").string()}, {"b", (root / "b.csv").string()}}},
      {"simulate", {{"model", model}, {"n", 64}, {"dt", 0.01}, {"t", 0.5}, {"seed", 3}}},
      {"meanfield", {{"model", model}, {"m", 200}, {"dt", 0.01}, {"mesh", 0.05}, {"t", 0.5}, {"seed", 3}}},
      {"chaos", {{"model", model}, {"n_list", {4, 8, 32}}, {"trials", 4}, {"t", 0.2}, {"dt", 0.01}, {"m", 100},
                 {"mesh", 0.05}, {"aleph_trials", 20}, {"seed", 3}}},
      {"omega", {{"a", triplet}, {"b", triplet}, {"x", {0.0}}, {"y", {1.0}}, {"mc_size", 2000}, {"replicates", 4}, {"seed", 3}}},
  };
  std::size_t identical = 0;
  for (auto [sub, layer] : runs) {
    layer["out"] = (root / sub).string();
    const auto cfg = cli::parse_config(sub, layer, io::json::object());
    cli::run(cfg);
    const auto first = slurp(root / sub / cli::kManifestFile);
    cli::run(cfg);
    identical += slurp(root / sub / cli::kManifestFile) == first && !first.empty();
  }
  fs::remove_all(root);
  return {identical == runs.size(), fmt("%.0f/%.0f subcommands rerun to byte-identical manifests", identical, runs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"OT oracle equivalence", ot_oracle},
      {"Gaussian closed form", gaussian_closed_form},
      {"Bures-Wasserstein hand cases", bures_hand_cases},
      {"zeta_beta continuity and value", zeta_checks},
      {"mean-field OU moments", ou_moments},
      {"PCA mesh Cauchy property", pca_cauchy},
      {"linearized stability inequality", linearized_stability},
      {"omega_2 closed forms and W_G bound", omega_closed_forms},
      {"aleph_N exactness", aleph_exactness},
      {"Fournier-Guillin bound", fournier_guillin},
      {"propagation-of-chaos rate", [] {
         const auto plain = chaos_rate(false);
         const auto jumps = chaos_rate(true);
         return Outcome{plain.pass && jumps.pass, "no jumps: " + plain.detail + " | 2-atom jumps: " + jumps.detail};
       }},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
