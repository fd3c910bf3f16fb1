#include "mfchaos/config.hpp"

#include <cmath>

#include "mfchaos/error.hpp"
#include "mfchaos/io.hpp"

namespace mfchaos::cli {

namespace {

template <class F>
void fields(OtParams& p, F&& f) {
  f("a", p.a);
  f("b", p.b);
  f("method", p.method);
  f("epsilon", p.epsilon);
  f("out", p.out);
}

template <class F>
void fields(SimulateParams& p, F&& f) {
  f("model", p.model);
  f("initial", p.initial);
  f("n", p.n);
  f("dt", p.dt);
  f("t", p.t);
  f("seed", p.seed);
  f("checkpoints", p.checkpoints);
  f("exact_compound_poisson", p.exact_compound_poisson);
  f("out", p.out);
}

template <class F>
void fields(MeanfieldParams& p, F&& f) {
  f("model", p.model);
  f("initial", p.initial);
  f("m", p.m);
  f("dt", p.dt);
  f("mesh", p.mesh);
  f("t", p.t);
  f("picard_tol", p.picard_tol);
  f("max_picard_iters", p.max_picard_iters);
  f("window", p.window);
  f("seed", p.seed);
  f("pca_meshes", p.pca_meshes);
  f("out", p.out);
}

template <class F>
void fields(ChaosParams& p, F&& f) {
  f("model", p.model);
  f("initial", p.initial);
  f("n_list", p.n_list);
  f("trials", p.trials);
  f("t", p.t);
  f("dt", p.dt);
  f("m", p.m);
  f("mesh", p.mesh);
  f("aleph_trials", p.aleph_trials);
  f("slope_lo", p.slope_lo);
  f("slope_hi", p.slope_hi);
  f("seed", p.seed);
  f("out", p.out);
}

template <class F>
void fields(OmegaParams& p, F&& f) {
  f("mode", p.mode);
  f("a", p.a);
  f("b", p.b);
  f("x", p.x);
  f("y", p.y);
  f("dt_grid", p.dt_grid);
  f("t_grid", p.t_grid);
  f("alpha", p.alpha);
  f("beta", p.beta);
  f("mc_size", p.mc_size);
  f("replicates", p.replicates);
  f("seed", p.seed);
  f("out", p.out);
}

Params make_params(const std::string& sub) {
  if (sub == "ot") return OtParams{};
  if (sub == "simulate") return SimulateParams{};
  if (sub == "meanfield") return MeanfieldParams{};
  if (sub == "chaos") return ChaosParams{};
  if (sub == "omega") return OmegaParams{};
  throw RangeError("subcommand", "unknown subcommand '" + sub + "'");
}

json params_to_json(Params p) {
  json j = json::object();
  std::visit([&](auto& q) { fields(q, [&](const char* k, auto& v) { j[k] = v; }); }, p);
  return j;
}

void require(bool ok, const char* key, const std::string& why) {
  if (!ok) throw RangeError(key, why);
}

void require_present(const std::string& v, const char* key) {
  if (v.empty()) throw MissingField(key);
}

void validate_time(double dt, double t) {
  require(std::isfinite(t) && t > 0.0, "t", "must be positive");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  require(dt <= t, "dt", "must not exceed t");
}

void validate(const OtParams& p) {
  require_present(p.a, "a");
  require_present(p.b, "b");
  require_present(p.out, "out");
  require(p.method == "auto" || p.method == "assignment" || p.method == "bruteforce" || p.method == "sinkhorn",
          "method", "expected auto, assignment, bruteforce or sinkhorn");
  require(p.epsilon >= 0.0, "epsilon", "must be nonnegative");
}

void validate(const SimulateParams& p) {
  require_present(p.model, "model");
  require_present(p.out, "out");
  require(p.n >= 2, "n", "must be at least 2");
  validate_time(p.dt, p.t);
  for (double c : p.checkpoints) require(c >= 0.0 && c <= p.t, "checkpoints", "must lie in [0, t]");
}

void validate(const MeanfieldParams& p) {
  require_present(p.model, "model");
  require_present(p.out, "out");
  require(p.m >= 2, "m", "must be at least 2");
  validate_time(p.dt, p.t);
  require(p.mesh >= p.dt && p.mesh <= p.t, "mesh", "must lie in [dt, t]");
  require(p.picard_tol > 0.0, "picard_tol", "must be positive");
  require(p.max_picard_iters >= 1, "max_picard_iters", "must be positive");
  require(p.window >= 0.0, "window", "must be nonnegative");
  for (double h : p.pca_meshes) require(h > 0.0 && h <= p.t, "pca_meshes", "must lie in (0, t]");
}

void validate(const ChaosParams& p) {
  require_present(p.model, "model");
  require_present(p.out, "out");
  require(p.n_list.size() >= 3, "n_list", "needs at least three values");
  for (std::size_t i = 0; i < p.n_list.size(); ++i) {
    require(p.n_list[i] >= 2, "n_list", "values must be at least 2");
    if (i) require(p.n_list[i] > p.n_list[i - 1], "n_list", "must be strictly increasing");
  }
  require(p.trials >= 2, "trials", "must be at least 2");
  validate_time(p.dt, p.t);
  require(p.m >= 2, "m", "must be at least 2");
  require(p.mesh >= p.dt && p.mesh <= p.t, "mesh", "must lie in [dt, t]");
  require(p.aleph_trials >= 2, "aleph_trials", "must be at least 2");
  require(p.slope_lo < p.slope_hi, "slope_lo", "must be below slope_hi");
}

void validate(const OmegaParams& p) {
  require(p.mode == "probe" || p.mode == "stability", "mode", "expected probe or stability");
  if (p.a.is_null()) throw MissingField("a");
  if (p.b.is_null()) throw MissingField("b");
  if (p.x.empty()) throw MissingField("x");
  if (p.y.empty()) throw MissingField("y");
  require_present(p.out, "out");
  require(p.x.size() == p.y.size(), "y", "must have the dimension of x");
  for (double dt : p.dt_grid) require(dt > 0.0, "dt_grid", "entries must be positive");
  for (double t : p.t_grid) require(t >= 0.0, "t_grid", "entries must be nonnegative");
  require(p.mode == "stability" || !p.dt_grid.empty(), "dt_grid", "must not be empty");
  require(p.mode == "probe" || !p.t_grid.empty(), "t_grid", "must not be empty");
  require(p.mc_size >= 1000, "mc_size", "must be at least 1000");
  require(p.replicates >= 2, "replicates", "must be at least 2");
  require(p.alpha >= 0.0, "alpha", "must be nonnegative");
  (void)io::triplet_from_json(p.a);
  (void)io::triplet_from_json(p.b);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"ot", "simulate", "meanfield", "chaos", "omega"};
  return names;
}

json defaults(const std::string& subcommand) { return params_to_json(make_params(subcommand)); }

ExperimentConfig parse_config(const std::string& subcommand, const json& file_layer, const json& flag_layer) {
  ExperimentConfig cfg;
  cfg.subcommand = subcommand;
  cfg.params = make_params(subcommand);
  json merged = defaults(subcommand);
  for (const json* layer : {&file_layer, &flag_layer}) {
    if (layer->is_null()) continue;
    if (!layer->is_object()) throw RangeError("config", "must be a JSON object");
    for (const auto& [k, v] : layer->items()) {
      if (k == "schema") {
        if (v != kConfigSchema) throw RangeError("schema", "expected " + std::string(kConfigSchema));
        continue;
      }
      if (k == "subcommand") {
        if (v != subcommand) throw RangeError("subcommand", "file is for a different subcommand");
        continue;
      }
      if (!merged.contains(k)) throw UnknownKey(k);
      merged[k] = v;
    }
  }
  std::visit(
      [&](auto& q) {
        fields(q, [&](const char* k, auto& v) {
          try {
            merged.at(k).get_to(v);
          } catch (const json::exception&) {
            throw RangeError(k, "wrong type");
          }
        });
        validate(q);
      },
      cfg.params);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& subcommand, const std::filesystem::path& path,
                                   const json& flag_layer) {
  if (!std::filesystem::exists(path)) throw Error("cli: config file not found: " + path.string());
  return parse_config(subcommand, io::read_json_file(path), flag_layer);
}

json to_json(const ExperimentConfig& c) {
  return {{"schema", c.schema}, {"subcommand", c.subcommand}, {"params", params_to_json(c.params)}};
}

ExperimentConfig from_json(const json& j) {
  if (!j.contains("subcommand")) throw MissingField("subcommand");
  if (!j.contains("params")) throw MissingField("params");
  const auto sub = j.at("subcommand").get<std::string>();
  json file = j.at("params");
  if (j.contains("schema")) file["schema"] = j.at("schema");
  return parse_config(sub, file, json::object());
}

const std::string& output_dir(const ExperimentConfig& c) {
  return std::visit([](const auto& p) -> const std::string& { return p.out; }, c.params);
}

}  // namespace mfchaos::cli
