#include "mfchaos/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mfchaos/error.hpp"
#include "mfchaos/kernels.hpp"

namespace mfchaos::io {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ParamError("io: " + where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw UnknownKey(where.empty() ? k : where + "." + k);
  }
}

template <class T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw MissingField(where.empty() ? key : where + "." + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw RangeError(where.empty() ? key : where + "." + key, "wrong type");
  }
}

template <class T>
T optional_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return required<T>(j, key, where);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  double v = 0.0;
  const auto res = std::from_chars(s.data() + b, s.data() + e, v);
  if (res.ec != std::errc() || res.ptr != s.data() + e) throw ParamError("io: cannot parse number '" + s + "'");
  return v;
}

}  // namespace

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  for (std::size_t k = 0; k < cloud.dim(); ++k) os << (k ? "," : "") << 'x' << k;
  os << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t k = 0; k < cloud.dim(); ++k) os << (k ? "," : "") << format_double(p[static_cast<Eigen::Index>(k)]);
    os << '\n';
  }
}

PointCloud read_cloud_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParamError("io: empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != "x" + std::to_string(k)) throw ParamError("io: CSV header must be x0..x{d-1}");
  }
  const std::size_t d = header.size();
  if (d == 0) throw ParamError("io: CSV header is empty");
  std::vector<double> coords;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != d) throw DimError("io: CSV row has " + std::to_string(cells.size()) + " columns, expected " + std::to_string(d));
    for (const auto& c : cells) coords.push_back(parse_double(c));
  }
  if (coords.empty()) throw EmptyMeasureError("io: CSV has no points");
  return PointCloud(d, std::move(coords));
}

void save_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io: cannot write " + path.string());
  write_cloud_csv(os, cloud);
}

PointCloud load_cloud_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io: cannot read " + path.string());
  return read_cloud_csv(is);
}

json cloud_to_json(const PointCloud& cloud) {
  json arr = json::array();
  for (std::size_t i = 0; i < cloud.size(); ++i) arr.push_back(vector_to_json(cloud.point(i)));
  return arr;
}

PointCloud cloud_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParamError("io: cloud must be a non-empty array of points");
  std::vector<Vec> pts;
  for (const auto& p : j) pts.push_back(vector_from_json(p));
  for (const auto& p : pts) {
    if (p.size() != pts.front().size()) throw DimError("io: cloud points differ in dimension");
  }
  return PointCloud::from_points(pts);
}

json vector_to_json(const Vec& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Vec vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParamError("io: vector must be a non-empty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParamError("io: vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Mat& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) arr.push_back(vector_to_json(m.row(r).transpose()));
  return arr;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParamError("io: matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Vec first = vector_from_json(j[0]);
  Mat m(rows, first.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vec row = vector_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != first.size()) throw DimError("io: matrix rows differ in length");
    m.row(r) = row.transpose();
  }
  return m;
}

json levy_to_json(const DiscreteLevyMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"z", vector_to_json(a.z)}, {"lambda", a.lambda}});
  return {{"atoms", atoms}};
}

DiscreteLevyMeasure levy_from_json(const json& j, std::size_t dim) {
  check_keys(j, {"atoms"}, "jump");
  const json atoms = j.contains("atoms") ? j.at("atoms") : json::array();
  if (!atoms.is_array()) throw ParamError("io: jump.atoms must be an array");
  std::vector<LevyAtom> out;
  for (const auto& a : atoms) {
    check_keys(a, {"z", "lambda"}, "jump.atoms[]");
    if (!a.contains("z")) throw MissingField("jump.atoms[].z");
    out.push_back({vector_from_json(a.at("z")), required<double>(a, "lambda", "jump.atoms[]")});
    if (static_cast<std::size_t>(out.back().z.size()) != dim) throw DimError("io: jump atom has the wrong dimension");
  }
  return DiscreteLevyMeasure(dim, std::move(out));
}

json triplet_to_json(const LevyTriplet& t) {
  json j{{"b", vector_to_json(t.b)}, {"sigma", matrix_to_json(t.sigma)}};
  if (t.jump) j["jump"] = {{"eta", matrix_to_json(t.jump->eta)}, {"base", levy_to_json(t.jump->base)}};
  return j;
}

LevyTriplet triplet_from_json(const json& j) {
  check_keys(j, {"b", "sigma", "jump"}, "triplet");
  if (!j.contains("b")) throw MissingField("triplet.b");
  if (!j.contains("sigma")) throw MissingField("triplet.sigma");
  LevyTriplet t;
  t.b = vector_from_json(j.at("b"));
  t.sigma = matrix_from_json(j.at("sigma"));
  if (j.contains("jump") && !j.at("jump").is_null()) {
    const auto& jj = j.at("jump");
    check_keys(jj, {"eta", "base"}, "triplet.jump");
    if (!jj.contains("eta")) throw MissingField("triplet.jump.eta");
    if (!jj.contains("base")) throw MissingField("triplet.jump.base");
    t.jump = JumpPart{matrix_from_json(jj.at("eta")), levy_from_json(jj.at("base"), t.dim())};
  }
  t.validate();
  return t;
}

namespace {

struct KernelChoice {
  std::string name;
  json params;
};

KernelChoice kernel_choice(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ParamError("io: " + where + " must be an object");
  check_keys(j, keys, where);
  return {required<std::string>(j, "name", where), j};
}

VecKernel drift_kernel(const json& j, std::size_t dim, double& kappa) {
  const auto c = kernel_choice(j, "drift", {"name", "kappa"});
  if (c.name == "linear_attraction") {
    kappa = required<double>(j, "kappa", "drift");
    return kernels::linear_attraction(kappa);
  }
  if (c.name == "zero") {
    kappa = 0.0;
    return kernels::zero_drift(dim);
  }
  throw ParamError("io: unknown drift kernel '" + c.name + "'");
}

MatKernel sigma_kernel(const json& j, std::size_t dim) {
  const auto c = kernel_choice(j, "sigma", {"name", "s"});
  if (c.name == "constant_sigma") return kernels::constant_sigma(dim, required<double>(j, "s", "sigma"));
  if (c.name == "zero") return kernels::zero_matrix(dim);
  throw ParamError("io: unknown sigma kernel '" + c.name + "'");
}

MatKernel eta_kernel(const json& j, std::size_t dim, double& eta1) {
  const auto c = kernel_choice(j, "eta", {"name", "eta0", "eta1"});
  if (c.name == "linear_eta") {
    eta1 = optional_or<double>(j, "eta1", 0.0, "eta");
    return kernels::linear_eta(dim, optional_or<double>(j, "eta0", 1.0, "eta"), eta1);
  }
  if (c.name == "zero") {
    eta1 = 0.0;
    return kernels::zero_matrix(dim);
  }
  throw ParamError("io: unknown eta kernel '" + c.name + "'");
}

LipschitzParams lipschitz_from_json(const json& j) {
  check_keys(j, {"alpha", "beta", "m", "m_prime"}, "lipschitz");
  LipschitzParams lp;
  lp.alpha = required<double>(j, "alpha", "lipschitz");
  lp.beta = required<double>(j, "beta", "lipschitz");
  lp.m = optional_or<double>(j, "m", 0.0, "lipschitz");
  lp.m_prime = optional_or<double>(j, "m_prime", 0.0, "lipschitz");
  if (lp.alpha < 0.0 || lp.beta < 0.0 || lp.m < 0.0 || lp.m_prime < 0.0) {
    throw RangeError("lipschitz", "constants must be nonnegative");
  }
  return lp;
}

}  // namespace

MeanFieldModel model_from_json(const json& j) {
  const auto kind = required<std::string>(j, "kind", "");
  const auto dim = required<std::size_t>(j, "dim", "");
  if (dim == 0) throw RangeError("dim", "must be positive");
  std::optional<DiscreteLevyMeasure> base;
  if (j.contains("jump") && !j.at("jump").is_null()) base = levy_from_json(j.at("jump"), dim);
  std::optional<LipschitzParams> lp;
  if (j.contains("lipschitz") && !j.at("lipschitz").is_null()) lp = lipschitz_from_json(j.at("lipschitz"));

  if (kind == "average_form") {
    check_keys(j, {"kind", "id", "dim", "drift", "sigma", "eta", "jump", "lipschitz"}, "");
    const auto id = optional_or<std::string>(j, "id", "average_form", "");
    double kappa = 0.0, eta1 = 0.0;
    AverageForm f;
    f.b = j.contains("drift") ? drift_kernel(j.at("drift"), dim, kappa) : kernels::zero_drift(dim);
    f.sigma = j.contains("sigma") ? sigma_kernel(j.at("sigma"), dim) : kernels::zero_matrix(dim);
    f.eta = j.contains("eta") ? eta_kernel(j.at("eta"), dim, eta1) : kernels::linear_eta(dim, 1.0, 0.0);
    if (!lp) lp = kernels::average_form_constants(kappa, eta1);
    return MeanFieldModel(dim, std::move(f), std::move(base), lp, id);
  }
  if (kind == "general") {
    check_keys(j, {"kind", "id", "dim", "builtin", "theta", "kappa", "s", "eta0", "jump", "lipschitz"}, "");
    const auto builtin = required<std::string>(j, "builtin", "");
    const auto id = optional_or<std::string>(j, "id", builtin, "");
    const double s = optional_or<double>(j, "s", 0.0, "");
    const double eta0 = optional_or<double>(j, "eta0", base ? 1.0 : 0.0, "");
    GeneralForm g;
    std::optional<LipschitzParams> known;
    if (builtin == "ou") {
      const double theta = required<double>(j, "theta", "");
      g = kernels::ou(dim, theta, s, eta0);
      known = LipschitzParams{0.0, theta * theta, 0.0, 0.0};
    } else if (builtin == "mean_attraction") {
      const double kappa = required<double>(j, "kappa", "");
      g = kernels::mean_attraction(dim, kappa, s, eta0);
      known = LipschitzParams{2.0 * kappa * kappa, 2.0 * kappa * kappa, 0.0, 0.0};
    } else if (builtin == "mean_ramp") {
      g = kernels::mean_ramp(dim, s);
    } else if (builtin == "zero") {
      g = kernels::zero(dim);
      known = LipschitzParams{};
    } else {
      throw ParamError("io: unknown general builtin '" + builtin + "'");
    }
    if (!lp) lp = known;
    return MeanFieldModel(dim, std::move(g), std::move(base), lp, id);
  }
  throw RangeError("kind", "expected \"general\" or \"average_form\"");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io: cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParamError("io: " + path.string() + ": " + e.what());
  }
}

MeanFieldModel load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io: cannot write " + path.string());
  os << j.dump(2) << '\n';
}

json to_json(const LinearFit& f) {
  return {{"intercept", f.intercept}, {"slope", f.slope}, {"intercept_stderr", f.intercept_se},
          {"slope_stderr", f.slope_se}, {"slope_ci", {f.slope_lo, f.slope_hi}}, {"r2", f.r2}};
}

json to_json(const ChaosReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"n", p.n}, {"t", p.t}, {"distance", p.distance}, {"stderr", p.se}, {"aleph", p.aleph},
                      {"aleph_stderr", p.aleph_se}, {"bound", p.bound}, {"verdict", p.verdict}});
  }
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"n", s.n}, {"sup_distance", s.sup_distance}, {"sup_distance_stderr", s.sup_distance_se},
                       {"sup_aleph", s.sup_aleph}, {"sup_aleph_stderr", s.sup_aleph_se}, {"bound", s.bound},
                       {"envelope_ok", s.envelope_ok}});
  }
  return {{"model_id", r.model_id},
          {"n_values", r.n_values},
          {"trials", r.trials},
          {"xi", to_string(r.xi)},
          {"bound_kind", "upper_bound_surrogate"},
          {"envelope", {{"alpha", r.alpha}, {"beta", r.beta}, {"b", r.b}, {"k", r.k}, {"zeta_kt", r.zeta_kt},
                        {"c_calibrated", r.c_calibrated}}},
          {"points", points},
          {"summary", summary},
          {"slope", to_json(r.slope)},
          {"slope_band", {r.slope_lo, r.slope_hi}},
          {"trivial", r.trivial},
          {"envelope_holds", r.envelope_holds},
          {"slope_ok", r.slope_ok},
          {"verdict", r.verdict},
          {"warnings", r.warnings},
          {"mean_field", convergence_log(r.mean_field)}};
}

json to_json(const OmegaReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"dt", row.dt}, {"estimate", row.estimate}, {"stderr", row.se}});
  return {{"closed_form", r.closed_form},
          {"closed_form_exact", r.closed_form_exact},
          {"drift_term", r.drift_term},
          {"diffusion_term", r.diffusion_term},
          {"jump_bound", r.jump_bound},
          {"wg_bound", r.wg_bound},
          {"rows", rows},
          {"extrapolated", r.extrapolated},
          {"extrapolated_stderr", r.extrapolated_se},
          {"tolerance", r.tolerance},
          {"matches_closed_form", r.matches_closed_form},
          {"within_wg_bound", r.within_wg_bound}};
}

json to_json(const ExpStabilityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"t", row.t}, {"lhs", row.lhs}, {"stderr", row.se}, {"rhs", row.rhs}, {"pass", row.pass}});
  }
  json j{{"rows", rows}, {"pass", r.pass}};
  if (r.rows.size() >= 3) j["lhs_vs_t"] = to_json(r.lhs_vs_t);
  return j;
}

json to_json(const FgReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"aleph", row.aleph}, {"aleph_stderr", row.aleph_se}, {"rate", row.rate},
                    {"bound", row.bound}, {"margin", row.margin}, {"pass", row.pass}});
  }
  return {{"family", to_string(r.family)}, {"d", r.d}, {"q", r.q}, {"mq", r.mq}, {"l_calibrated", r.l_calibrated},
          {"rows", rows}, {"bound_holds", r.bound_holds}, {"ratio_ok", r.ratio_ok}, {"warnings", r.warnings}};
}

json to_json(const StabilityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"t", row.t}, {"lhs", row.lhs}, {"stderr", row.lhs_stderr}, {"rhs", row.rhs}, {"pass", row.pass}});
  }
  return {{"initial_cost", r.initial_cost}, {"rows", rows}, {"pass", r.pass}};
}

json to_json(const std::vector<PcaRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"mesh", r.mesh}, {"distance_to_finest", r.distance_to_finest}, {"distance_to_next", r.distance_to_next}});
  }
  return arr;
}

json convergence_log(const MeanFieldSolution& s) {
  return {{"window", s.window},
          {"picard_iters_per_window", s.picard_iters_per_window},
          {"residuals_per_window", s.residuals_per_window},
          {"times", s.curve.times()},
          {"warnings", s.warnings}};
}

void write_chaos_csv(std::ostream& os, const ChaosReport& r) {
  os << "N,t,distance,stderr,aleph,aleph_stderr,bound,verdict\n";
  for (const auto& p : r.points) {
    os << p.n << ',' << format_double(p.t) << ',' << format_double(p.distance) << ',' << format_double(p.se) << ','
       << format_double(p.aleph) << ',' << format_double(p.aleph_se) << ',' << format_double(p.bound) << ','
       << (p.verdict ? "pass" : "fail") << '\n';
  }
}

}  // namespace mfchaos::io
