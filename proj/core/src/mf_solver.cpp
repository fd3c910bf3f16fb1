#include "mfchaos/mf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/rng.hpp"
#include "mfchaos/simulator.hpp"

namespace mfchaos {

double zeta(double beta, double t) {
  if (beta < 0.0 || t < 0.0 || !std::isfinite(beta) || !std::isfinite(t)) {
    throw ParamError("mf_solver: zeta needs beta >= 0 and t >= 0");
  }
  const double x = beta * t;
  if (x < 1e-6) return t * (1.0 + x / 2.0 + x * x / 6.0);
  return std::expm1(x) / beta;
}

void SolverConfig::validate() const {
  if (m == 0) throw ParamError("mf_solver: cloud size must be positive");
  if (!(dt > 0.0)) throw ParamError("mf_solver: dt must be positive");
  if (!(mesh >= dt * (1.0 - 1e-9))) throw ParamError("mf_solver: mesh must be at least dt");
  if (!(picard_tol > 0.0)) throw ParamError("mf_solver: picard_tol must be positive");
  if (max_picard_iters == 0) throw ParamError("mf_solver: max_picard_iters must be positive");
  if (window < 0.0) throw ParamError("mf_solver: window must be nonnegative");
}

std::vector<double> uniform_partition(double horizon, double mesh) {
  if (!(mesh > 0.0) || !(horizon > 0.0)) throw ParamError("mf_solver: partition needs T > 0 and mesh > 0");
  const double k = std::round(horizon / mesh);
  if (k < 1.0 || std::abs(k * mesh - horizon) > time_tol(horizon)) {
    throw ParamError("mf_solver: horizon " + std::to_string(horizon) + " is not a multiple of mesh " +
                     std::to_string(mesh));
  }
  const auto cells = static_cast<std::size_t>(k);
  std::vector<double> times(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) times[i] = horizon * static_cast<double>(i) / static_cast<double>(cells);
  return times;
}

namespace {

std::size_t grid_step(double t, double dt, const char* what) {
  const double k = std::round(t / dt);
  if (std::abs(k * dt - t) > time_tol(t)) {
    throw ParamError(std::string("mf_solver: ") + what + " " + std::to_string(t) + " is not a multiple of dt " +
                     std::to_string(dt));
  }
  return static_cast<std::size_t>(k);
}

}  // namespace

MeasureCurve solve_linearized(const MeanFieldModel& model, const MeasureCurve& mu_curve, const PointCloud& rho0,
                              const SolverConfig& config, double t0, double t1) {
  config.validate();
  if (rho0.size() != config.m) {
    throw SizeError("mf_solver: rho0 has " + std::to_string(rho0.size()) + " points, expected " +
                    std::to_string(config.m));
  }
  if (rho0.dim() != model.dim()) throw DimError("mf_solver: rho0 dimension differs from the model");
  if (!(t1 >= t0)) throw ParamError("mf_solver: window end precedes its start");
  mu_curve.require_covers(t0, t1);

  const double tol = time_tol(t1);
  std::vector<double> times;
  for (double t : mu_curve.times()) {
    if (t >= t0 - tol && t <= t1 + tol) times.push_back(t);
  }
  if (times.empty() || std::abs(times.front() - t0) > tol || std::abs(times.back() - t1) > tol) {
    throw ParamError("mf_solver: window endpoints must be partition times of the curve");
  }

  std::vector<PointCloud> clouds;
  clouds.reserve(times.size());
  clouds.push_back(rho0);
  PointCloud x = rho0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const std::size_t s0 = grid_step(times[k - 1], config.dt, "partition time");
    const std::size_t s1 = grid_step(times[k], config.dt, "partition time");
    const PointCloud& mu = mu_curve.at(times[k - 1]);
    for (std::size_t s = s0; s < s1; ++s) {
      const auto noise = draw_noise(config.seed, config.job, x.size(), x.dim(), s, config.dt, model.base_jump(),
                                    config.exact_compound_poisson);
      step_frozen(x, model, mu, config.dt, noise);
      check_finite(x, s + 1, static_cast<double>(s + 1) * config.dt);
    }
    clouds.push_back(x);
  }
  return MeasureCurve(std::move(times), std::move(clouds));
}

MeasureCurve solve_linearized(const MeanFieldModel& model, const MeasureCurve& mu_curve, const PointCloud& rho0,
                              const SolverConfig& config) {
  return solve_linearized(model, mu_curve, rho0, config, mu_curve.start(), mu_curve.end());
}

double default_window(double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) throw ParamError("mf_solver: Lipschitz constants must be nonnegative");
  if (alpha == 0.0) return std::numeric_limits<double>::infinity();
  if (beta == 0.0) return 1.0 / (2.0 * alpha);
  return std::log1p(beta / (2.0 * alpha)) / beta;
}

double curve_distance(const PointCloud& a, const PointCloud& b, std::size_t assignment_limit, bool* exact) {
  if (a.dim() == 1 || (a.size() == b.size() && a.size() <= assignment_limit) || a.size() != b.size()) {
    if (exact) *exact = true;
    return transport_cost(a, b).cost;
  }
  if (exact) *exact = false;
  return tensorized_cost(a, b);
}

MeanFieldSolution solve_mean_field(const MeanFieldModel& model, const PointCloud& rho0, double horizon,
                                   const SolverConfig& config) {
  config.validate();
  const std::vector<double> partition = uniform_partition(horizon, config.mesh);
  MeanFieldSolution out;

  double h = config.window;
  if (h <= 0.0) {
    if (const auto& lp = model.lipschitz()) {
      h = default_window(lp->alpha, lp->beta);
    } else {
      h = horizon / 8.0;
      out.warnings.push_back("no Lipschitz constants declared; Picard window set to T/8");
    }
  }
  const std::size_t cells_total = partition.size() - 1;
  const double cells_per_window_raw = std::floor(h / config.mesh + 1e-9);
  std::size_t cells_per_window = 1;
  if (!std::isfinite(cells_per_window_raw) || cells_per_window_raw >= static_cast<double>(cells_total)) {
    cells_per_window = cells_total;
  } else if (cells_per_window_raw >= 1.0) {
    cells_per_window = static_cast<std::size_t>(cells_per_window_raw);
  } else {
    out.warnings.push_back("Picard window shorter than one mesh cell; using one cell");
  }
  out.window = static_cast<double>(cells_per_window) * config.mesh;
  if (model.lipschitz()) {
    const auto& lp = *model.lipschitz();
    if (lp.alpha * zeta(lp.beta, out.window) >= 1.0) {
      out.warnings.push_back("declared constants give alpha * zeta_beta(window) >= 1");
    }
  }

  std::vector<PointCloud> clouds{rho0};
  std::vector<double> times{partition.front()};
  bool warned_bound = false;
  for (std::size_t a = 0; a < cells_total; a += cells_per_window) {
    const std::size_t b = std::min(a + cells_per_window, cells_total);
    const std::vector<double> sub(partition.begin() + static_cast<std::ptrdiff_t>(a),
                                  partition.begin() + static_cast<std::ptrdiff_t>(b) + 1);
    const PointCloud start = clouds.back();
    MeasureCurve current = solve_linearized(model, MeasureCurve::constant(sub, start), start, config,
                                            sub.front(), sub.back());
    std::vector<double> residuals;
    for (std::size_t k = 1;; ++k) {
      MeasureCurve next = solve_linearized(model, current, start, config, sub.front(), sub.back());
      double r = 0.0;
      for (std::size_t i = 0; i < next.size(); ++i) {
        bool exact = true;
        r = std::max(r, curve_distance(next.cloud(i), current.cloud(i), config.residual_assignment_limit, &exact));
        if (!exact && !warned_bound) {
          out.warnings.push_back("Picard residuals use the index-paired upper bound on C2");
          warned_bound = true;
        }
      }
      residuals.push_back(r);
      current = std::move(next);
      if (r < config.picard_tol) {
        out.picard_iters_per_window.push_back(k);
        break;
      }
      if (k >= config.max_picard_iters) {
        throw NonContractionError("mf_solver: Picard iteration did not reach tolerance on window [" +
                                      std::to_string(sub.front()) + ", " + std::to_string(sub.back()) + "]",
                                  residuals);
      }
    }
    out.residuals_per_window.push_back(std::move(residuals));
    for (std::size_t i = 1; i < current.size(); ++i) {
      times.push_back(current.times()[i]);
      clouds.push_back(current.cloud(i));
    }
  }
  out.curve = MeasureCurve(std::move(times), std::move(clouds));
  return out;
}

std::vector<PcaRow> pca_refinement_study(const MeanFieldModel& model, const std::optional<MeasureCurve>& mu_curve,
                                         const PointCloud& rho0, double horizon, const std::vector<double>& meshes,
                                         const SolverConfig& config) {
  if (meshes.size() < 2) throw ParamError("mf_solver: a refinement study needs at least two meshes");
  for (std::size_t k = 1; k < meshes.size(); ++k) {
    if (!(meshes[k] < meshes[k - 1])) throw ParamError("mf_solver: meshes must be strictly decreasing");
    const double ratio = meshes[k - 1] / meshes[k];
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ParamError("mf_solver: meshes must give nested partitions");
    }
  }
  if (mu_curve) mu_curve->require_covers(0.0, horizon);
  const std::vector<double> coarse = uniform_partition(horizon, meshes.front());

  std::vector<std::vector<PointCloud>> at_coarse;
  for (double h : meshes) {
    SolverConfig cfg = config;
    cfg.mesh = h;
    MeasureCurve sol;
    if (mu_curve) {
      const auto part = uniform_partition(horizon, h);
      std::vector<PointCloud> frozen;
      frozen.reserve(part.size());
      for (double t : part) frozen.push_back(mu_curve->at(t));
      sol = solve_linearized(model, MeasureCurve(part, std::move(frozen)), rho0, cfg);
    } else {
      sol = solve_mean_field(model, rho0, horizon, cfg).curve;
    }
    std::vector<PointCloud> row;
    for (double t : coarse) row.push_back(sol.at(t));
    at_coarse.push_back(std::move(row));
  }

  auto sup_distance = [&](std::size_t p, std::size_t q) {
    double r = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      r = std::max(r, curve_distance(at_coarse[p][i], at_coarse[q][i], config.residual_assignment_limit));
    }
    return r;
  };
  std::vector<PcaRow> out;
  const std::size_t finest = meshes.size() - 1;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    PcaRow row;
    row.mesh = meshes[k];
    row.distance_to_finest = k == finest ? 0.0 : sup_distance(k, finest);
    row.distance_to_next = k == finest ? 0.0 : sup_distance(k, k + 1);
    out.push_back(row);
  }
  return out;
}

StabilityReport stability_check(const MeanFieldModel& model, const MeasureCurve& mu_curve, const MeasureCurve& nu_curve,
                                const PointCloud& rho0, const PointCloud& sigma0, double alpha, double beta,
                                const SolverConfig& config, std::size_t replicates) {
  if (replicates < 2) throw ParamError("mf_solver: stability_check needs at least two replicates");
  if (mu_curve.times() != nu_curve.times()) throw ParamError("mf_solver: the two curves need one partition");
  if (rho0.size() != sigma0.size()) throw SizeError("mf_solver: rho0 and sigma0 need equal sizes");

  const auto match = exact_w2_assignment(rho0, sigma0);
  std::vector<double> coords;
  coords.reserve(sigma0.coords().size());
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    const auto p = sigma0.point(match.plan.perm[i]);
    coords.insert(coords.end(), p.data(), p.data() + p.size());
  }
  const PointCloud sigma_matched(sigma0.dim(), std::move(coords));

  StabilityReport report;
  report.initial_cost = match.cost;
  const auto& times = mu_curve.times();
  const std::size_t nt = times.size();
  std::vector<double> sum(nt, 0.0), sum_sq(nt, 0.0);
  for (std::size_t r = 0; r < replicates; ++r) {
    SolverConfig cfg = config;
    cfg.m = rho0.size();
    cfg.job = splitmix64(config.job) ^ r;
    const MeasureCurve rho = solve_linearized(model, mu_curve, rho0, cfg);
    const MeasureCurve sig = solve_linearized(model, nu_curve, sigma_matched, cfg);
    for (std::size_t i = 0; i < nt; ++i) {
      const double c = curve_distance(rho.cloud(i), sig.cloud(i), config.residual_assignment_limit);
      sum[i] += c;
      sum_sq[i] += c * c;
    }
  }

  double sup_mu_nu = 0.0;
  const auto rn = static_cast<double>(replicates);
  for (std::size_t i = 0; i < nt; ++i) {
    sup_mu_nu = std::max(sup_mu_nu, transport_cost(mu_curve.cloud(i), nu_curve.cloud(i)).cost);
    StabilityRow row;
    row.t = times[i];
    row.lhs = sum[i] / rn;
    const double var = std::max(0.0, (sum_sq[i] - rn * row.lhs * row.lhs) / (rn - 1.0));
    row.lhs_stderr = std::sqrt(var / rn);
    const double elapsed = times[i] - times.front();
    row.rhs = report.initial_cost * std::exp(beta * elapsed) + alpha * zeta(beta, elapsed) * sup_mu_nu;
    row.pass = row.lhs <= row.rhs + 3.0 * row.lhs_stderr + 1e-12;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mfchaos
