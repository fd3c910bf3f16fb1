#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/chaos.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/parallel.hpp"
#include "mfchaos/rng.hpp"
#include "mfchaos/simulator.hpp"

namespace mfchaos {

namespace {

std::vector<double> checkpoint_grid(double horizon, double every) {
  if (!(every > 0.0)) throw ParamError("chaos_harness: checkpoint spacing must be positive");
  const double k = std::round(horizon / every);
  if (k < 1.0 || std::abs(k * every - horizon) > time_tol(horizon)) {
    throw ParamError("chaos_harness: horizon must be a multiple of the checkpoint spacing");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(k); ++i) out.push_back(static_cast<double>(i) * every);
  out.back() = horizon;
  return out;
}

PointCloud resample(const PointCloud& rho, std::size_t n, Stream& s) {
  std::vector<double> coords;
  coords.reserve(n * rho.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = rho.point(static_cast<std::size_t>(s.below(rho.size())));
    coords.insert(coords.end(), p.data(), p.data() + p.size());
  }
  return PointCloud(rho.dim(), std::move(coords));
}

}  // namespace

ChaosReport poc_rate_experiment(const MeanFieldModel& model, const PointCloud& rho0, double horizon,
                                const std::vector<std::size_t>& n_list, std::size_t trials, const PocConfig& config) {
  if (n_list.size() < 3) throw ParamError("chaos_harness: poc_rate_experiment needs at least three N values");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end() || n_list.front() < 2) {
    throw ParamError("chaos_harness: N values must be strictly increasing and at least 2");
  }
  if (n_list.back() < 8 * n_list.front()) throw ParamError("chaos_harness: N range must span a factor of at least 8");
  if (trials < 2) throw ParamError("chaos_harness: poc_rate_experiment needs at least two trials");
  if (rho0.empty()) throw EmptyMeasureError("chaos_harness: rho0 is empty");
  if (rho0.dim() != model.dim()) throw DimError("chaos_harness: rho0 and model dimensions differ");
  if (!(config.slope_lo < config.slope_hi)) throw ParamError("chaos_harness: slope band is empty");

  ChaosReport rep;
  rep.model_id = model.id();
  rep.n_values = n_list;
  rep.trials = trials;
  rep.xi = model.is_average_form() ? XiKind::SigmaSq : XiKind::W2Squared;
  rep.b = config.relaxed_triangle_b;
  rep.slope_lo = config.slope_lo;
  rep.slope_hi = config.slope_hi;

  const auto times = checkpoint_grid(horizon, config.checkpoint_every);
  rep.mean_field = solve_mean_field(model, rho0, horizon, config.solver);
  for (const auto& w : rep.mean_field.warnings) rep.warnings.push_back("mean field: " + w);
  const MeasureCurve& curve = rep.mean_field.curve;

  // envelope constants
  LipschitzParams lp;
  if (model.lipschitz()) {
    lp = *model.lipschitz();
  } else {
    const auto probe = lipschitz_probe(model, 200, config.seed);
    lp.alpha = probe.alpha_hat;
    lp.beta = probe.beta_hat;
    rep.warnings.push_back("no declared Lipschitz constants; using probed estimates");
  }
  const double dfac = model.has_jumps() ? std::max(1.0, model.base_jump()->second_moment()) : 1.0;
  rep.alpha = dfac * lp.alpha;
  rep.beta = dfac * lp.beta + 1.0;
  rep.k = rep.beta + 2.0 * rep.alpha * rep.b;
  rep.zeta_kt = zeta(rep.k, horizon);

  rep.trivial = model.dependence() == MeasureDependence::None;

  // synchronous pairs
  const std::size_t nt = times.size();
  std::vector<std::vector<double>> dist(n_list.size(), std::vector<double>(trials * nt, 0.0));
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::size_t n = n_list[ni];
    parallel_for(trials, [&](std::size_t tr) {
      Stream s(config.seed, 0x706f6330ull + ni, tr, 0);
      const PointCloud x0 = resample(rho0, n, s);
      SimConfig sc;
      sc.n = n;
      sc.dim = model.dim();
      sc.horizon = horizon;
      sc.dt = config.dt;
      sc.seed = config.seed;
      sc.job = stream_key(config.seed, 0x706f6331ull + ni, tr);
      sc.checkpoints = times;
      sc.exact_compound_poisson = config.solver.exact_compound_poisson;
      const auto cps = simulate_synchronous_pair(sc, model, curve, x0);
      for (std::size_t k = 0; k < nt; ++k) dist[ni][tr * nt + k] = cps[k].mean_cost;
    });
  }

  // aleph along the curve
  std::vector<std::vector<AlephEstimate>> aleph(n_list.size(), std::vector<AlephEstimate>(nt));
  const Xi xi{rep.xi, &model};
  for (std::size_t ni = 0; ni < n_list.size() && !rep.trivial; ++ni) {
    for (std::size_t k = 0; k < nt; ++k) {
      aleph[ni][k] = estimate_aleph(curve.at(times[k]), xi, n_list[ni], config.aleph_trials, config.seed,
                                    0x616c6570ull + 64 * ni + k);
    }
  }

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    PocSummary sm;
    sm.n = n_list[ni];
    for (std::size_t k = 0; k < nt; ++k) {
      std::vector<double> col(trials);
      for (std::size_t tr = 0; tr < trials; ++tr) col[tr] = dist[ni][tr * nt + k];
      const auto ms = mean_stderr(col);
      PocPoint p;
      p.n = n_list[ni];
      p.t = times[k];
      p.distance = ms.mean;
      p.se = ms.se;
      p.aleph = aleph[ni][k].mean;
      p.aleph_se = aleph[ni][k].se;
      rep.points.push_back(p);
      if (k == 0 || p.distance > sm.sup_distance) {
        sm.sup_distance = p.distance;
        sm.sup_distance_se = p.se;
      }
      if (k == 0 || p.aleph > sm.sup_aleph) {
        sm.sup_aleph = p.aleph;
        sm.sup_aleph_se = p.aleph_se;
      }
    }
    rep.summary.push_back(sm);
  }

  if (rep.trivial) {
    rep.warnings.push_back("model does not depend on the measure: distances vanish and the slope is undefined");
    rep.slope_ok = true;
    rep.envelope_holds = true;
    rep.verdict = true;
    for (const auto& sm : rep.summary) {
      if (sm.sup_distance != 0.0) rep.envelope_holds = false;
    }
    rep.verdict = rep.envelope_holds;
    return rep;
  }

  const auto& s0 = rep.summary.front();
  const double denom = rep.zeta_kt * s0.sup_aleph;
  rep.c_calibrated = denom > 0.0 ? s0.sup_distance / denom : 0.0;
  for (std::size_t ni = 0; ni < rep.summary.size(); ++ni) {
    auto& sm = rep.summary[ni];
    sm.bound = rep.c_calibrated * rep.zeta_kt * sm.sup_aleph;
    sm.envelope_ok = sm.sup_distance <= sm.bound + 3.0 * sm.sup_distance_se + 1e-15;
    if (ni > 0) rep.envelope_holds = rep.envelope_holds && sm.envelope_ok;
  }
  for (auto& p : rep.points) {
    const auto it = std::find_if(rep.summary.begin(), rep.summary.end(), [&](const PocSummary& s) { return s.n == p.n; });
    p.bound = it->bound;
    p.verdict = p.distance <= p.bound + 3.0 * p.se + 1e-15;
  }

  std::vector<double> lx, ly;
  for (const auto& sm : rep.summary) {
    if (sm.sup_distance > 0.0) {
      lx.push_back(std::log(static_cast<double>(sm.n)));
      ly.push_back(std::log(sm.sup_distance));
    }
  }
  if (lx.size() >= 3) {
    rep.slope = ols(lx, ly);
    rep.slope_ok = rep.slope.slope >= config.slope_lo && rep.slope.slope <= config.slope_hi;
  } else {
    rep.slope_ok = false;
    rep.warnings.push_back("fewer than three positive distances; slope not fitted");
  }
  // the slope band is asserted for average-form models only
  rep.verdict = rep.envelope_holds && (rep.slope_ok || !model.is_average_form());
  return rep;
}

}  // namespace mfchaos
