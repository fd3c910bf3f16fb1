#include "mfchaos/commands.hpp"

#include <chrono>
#include <fstream>

#include "mfchaos/chaos.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/io.hpp"
#include "mfchaos/mf_solver.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/rng.hpp"
#include "mfchaos/simulator.hpp"

#ifndef MFCHAOS_VERSION
#define MFCHAOS_VERSION "0.0.0"
#endif

namespace mfchaos::cli {

const char* tool_version() { return MFCHAOS_VERSION; }

namespace {

namespace fs = std::filesystem;

struct Outputs {
  fs::path dir;
  std::vector<std::string> names;

  void json_file(const std::string& name, const json& j) {
    io::write_json_file(dir / name, j);
    names.push_back(name);
  }
  void cloud_file(const std::string& name, const PointCloud& c) {
    io::save_cloud_csv(dir / name, c);
    names.push_back(name);
  }
  std::ofstream stream(const std::string& name) {
    names.push_back(name);
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw Error("cli: cannot write " + (dir / name).string());
    return os;
  }
};

PointCloud standard_normal_cloud(std::size_t count, std::size_t dim, std::uint64_t seed) {
  std::vector<double> coords(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    Stream s(seed, 0x696e6974ull, i, 0);
    for (std::size_t k = 0; k < dim; ++k) coords[i * dim + k] = s.normal();
  }
  return PointCloud(dim, std::move(coords));
}

PointCloud initial_cloud(const std::string& path, std::size_t count, std::size_t dim, std::uint64_t seed,
                         const char* size_key) {
  if (path.empty()) return standard_normal_cloud(count, dim, seed);
  PointCloud c = io::load_cloud_csv(path);
  if (c.dim() != dim) throw DimError("cli: initial cloud dimension does not match the model");
  if (c.size() != count) throw RangeError(size_key, "must equal the number of points in the initial cloud");
  return c;
}

std::string time_tag(std::size_t k, double t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", k);
  return std::string(buf) + "_t" + io::format_double(t);
}

bool run_ot(const OtParams& p, Outputs& out) {
  const PointCloud a = io::load_cloud_csv(p.a);
  const PointCloud b = io::load_cloud_csv(p.b);
  json j{{"a_size", a.size()}, {"b_size", b.size()}, {"dim", a.dim()}, {"method", p.method}};
  if (p.method == "assignment") {
    const auto r = exact_w2_assignment(a, b);
    j["cost"] = r.cost;
    j["exact"] = true;
    j["assignment"] = r.plan.perm;
  } else if (p.method == "bruteforce") {
    const auto r = bruteforce_ot(WeightedCloud::uniform(a), WeightedCloud::uniform(b));
    j["cost"] = r.cost;
    j["exact"] = true;
    j["plan"] = io::matrix_to_json(r.plan.mass);
  } else if (p.method == "sinkhorn") {
    double eps = p.epsilon;
    if (eps == 0.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) s += half_sq_dist(a.point(i), b.point(k));
      }
      eps = 0.005 * s / static_cast<double>(a.size() * b.size());
      if (!(eps > 0.0)) eps = 1e-12;
    }
    const TransportOptions o;
    const auto r = sinkhorn_w2(WeightedCloud::uniform(a), WeightedCloud::uniform(b), eps, o.sinkhorn_max_iters, o.sinkhorn_tol);
    j["cost"] = r.cost;
    j["exact"] = false;
    j["epsilon"] = eps;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
  } else {
    const auto r = transport_cost(a, b);
    j["cost"] = r.cost;
    j["exact"] = r.exact;
    j["method"] = to_string(r.method);
  }
  out.json_file("ot.json", j);
  return true;
}

bool run_simulate(const SimulateParams& p, Outputs& out) {
  const MeanFieldModel model = io::load_model(p.model);
  const PointCloud x0 = initial_cloud(p.initial, p.n, model.dim(), p.seed, "n");
  SimConfig sc;
  sc.n = p.n;
  sc.dim = model.dim();
  sc.horizon = p.t;
  sc.dt = p.dt;
  sc.seed = p.seed;
  sc.checkpoints = p.checkpoints;
  sc.exact_compound_poisson = p.exact_compound_poisson;
  const auto cps = simulate(sc, model, x0);
  json files = json::array();
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const std::string name = "checkpoint_" + time_tag(k, cps[k].t) + ".csv";
    out.cloud_file(name, cps[k].state.positions);
    files.push_back({{"t", cps[k].t}, {"file", name}});
  }
  out.json_file("simulate.json", {{"model_id", model.id()}, {"checkpoints", files}});
  return true;
}

SolverConfig solver_config(std::size_t m, double dt, double mesh, std::uint64_t seed) {
  SolverConfig sc;
  sc.m = m;
  sc.dt = dt;
  sc.mesh = mesh;
  sc.seed = seed;
  return sc;
}

bool run_meanfield(const MeanfieldParams& p, Outputs& out) {
  const MeanFieldModel model = io::load_model(p.model);
  const PointCloud rho0 = initial_cloud(p.initial, p.m, model.dim(), p.seed, "m");
  SolverConfig sc = solver_config(p.m, p.dt, p.mesh, p.seed);
  sc.picard_tol = p.picard_tol;
  sc.max_picard_iters = p.max_picard_iters;
  sc.window = p.window;
  const auto sol = solve_mean_field(model, rho0, p.t, sc);
  json files = json::array();
  for (std::size_t k = 0; k < sol.curve.size(); ++k) {
    const std::string name = "curve_" + time_tag(k, sol.curve.times()[k]) + ".csv";
    out.cloud_file(name, sol.curve.cloud(k));
    files.push_back({{"t", sol.curve.times()[k]}, {"file", name}});
  }
  json log = io::convergence_log(sol);
  log["model_id"] = model.id();
  log["clouds"] = files;
  if (!p.pca_meshes.empty()) {
    log["mesh_table"] = io::to_json(pca_refinement_study(model, std::nullopt, rho0, p.t, p.pca_meshes, sc));
  }
  out.json_file("convergence.json", log);
  return true;
}

bool run_chaos(const ChaosParams& p, Outputs& out) {
  const MeanFieldModel model = io::load_model(p.model);
  const PointCloud rho0 = initial_cloud(p.initial, p.m, model.dim(), p.seed, "m");
  PocConfig pc;
  pc.dt = p.dt;
  pc.aleph_trials = p.aleph_trials;
  pc.solver = solver_config(p.m, p.dt, p.mesh, p.seed);
  pc.seed = p.seed;
  pc.slope_lo = p.slope_lo;
  pc.slope_hi = p.slope_hi;
  const auto rep = poc_rate_experiment(model, rho0, p.t, p.n_list, p.trials, pc);
  out.json_file("chaos.json", io::to_json(rep));
  auto os = out.stream("chaos.csv");
  io::write_chaos_csv(os, rep);
  return rep.verdict;
}

bool run_omega(const OmegaParams& p, Outputs& out) {
  const LevyTriplet a = io::triplet_from_json(p.a);
  const LevyTriplet b = io::triplet_from_json(p.b);
  const Vec x = Eigen::Map<const Vec>(p.x.data(), static_cast<Eigen::Index>(p.x.size()));
  const Vec y = Eigen::Map<const Vec>(p.y.data(), static_cast<Eigen::Index>(p.y.size()));
  OmegaOptions opt;
  opt.replicates = p.replicates;
  if (p.mode == "probe") {
    const auto rep = omega_probe(a, b, x, y, p.dt_grid, p.mc_size, p.seed, opt);
    out.json_file("omega.json", io::to_json(rep));
    return rep.within_wg_bound && (!rep.closed_form_exact || rep.matches_closed_form);
  }
  const auto rep = exp_stability_check(a, b, x, y, p.alpha, p.beta, p.t_grid, p.mc_size, p.seed, opt);
  out.json_file("omega.json", io::to_json(rep));
  return rep.pass;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Outputs out;
  out.dir = output_dir(config);
  fs::create_directories(out.dir);

  const bool pass = std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OtParams>) return run_ot(p, out);
        else if constexpr (std::is_same_v<T, SimulateParams>) return run_simulate(p, out);
        else if constexpr (std::is_same_v<T, MeanfieldParams>) return run_meanfield(p, out);
        else if constexpr (std::is_same_v<T, ChaosParams>) return run_chaos(p, out);
        else return run_omega(p, out);
      },
      config.params);

  RunResult res;
  res.exit_code = pass ? kExitPass : kExitVerdictFail;
  res.manifest.schema = config.schema;
  res.manifest.tool_version = tool_version();
  res.manifest.config = to_json(config);
  res.manifest.verdict = pass ? "pass" : "fail";
  res.manifest.outputs = hash_outputs(out.dir, out.names);
  io::write_json_file(out.dir / kManifestFile, to_json(res.manifest));

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_json_file(out.dir / kTimingFile, {{"wall_seconds", wall}});
  return res;
}

}  // namespace mfchaos::cli
