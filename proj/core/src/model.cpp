#include "mfchaos/model.hpp"

#include <algorithm>
#include <cmath>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"
#include "mfchaos/rng.hpp"

namespace mfchaos {

CoefficientTuple operator-(const CoefficientTuple& a, const CoefficientTuple& b) {
  return {a.b - b.b, a.sigma - b.sigma, a.eta - b.eta};
}

CoefficientTuple operator*(double c, const CoefficientTuple& t) { return {c * t.b, c * t.sigma, c * t.eta}; }

double vnorm_sq(const CoefficientTuple& t) {
  return 0.5 * t.b.squaredNorm() + 0.5 * t.sigma.squaredNorm() + 0.5 * t.eta.squaredNorm();
}

double vnorm(const CoefficientTuple& t) { return std::sqrt(vnorm_sq(t)); }

MeanFieldModel::MeanFieldModel(std::size_t dim, GeneralForm form, std::optional<DiscreteLevyMeasure> base_jump,
                               std::optional<LipschitzParams> lipschitz, std::string id)
    : dim_(dim), form_(std::move(form)), base_jump_(std::move(base_jump)), lipschitz_(lipschitz),
      id_(std::move(id)) {
  if (dim_ == 0) throw DimError("levy_model: model dimension must be positive");
  const auto& g = std::get<GeneralForm>(form_);
  if (!g.b || !g.sigma || !g.eta) throw ParamError("levy_model: general form needs b, sigma and eta");
  if (base_jump_ && base_jump_->dim() != dim_) throw DimError("levy_model: base jump measure has wrong dimension");
}

MeanFieldModel::MeanFieldModel(std::size_t dim, AverageForm form, std::optional<DiscreteLevyMeasure> base_jump,
                               std::optional<LipschitzParams> lipschitz, std::string id)
    : dim_(dim), form_(std::move(form)), base_jump_(std::move(base_jump)), lipschitz_(lipschitz),
      id_(std::move(id)) {
  if (dim_ == 0) throw DimError("levy_model: model dimension must be positive");
  const auto& a = std::get<AverageForm>(form_);
  if (!a.b.f || !a.sigma.f || !a.eta.f) throw ParamError("levy_model: average form needs three kernels");
  if (base_jump_ && base_jump_->dim() != dim_) throw DimError("levy_model: base jump measure has wrong dimension");
}

const GeneralForm& MeanFieldModel::general() const {
  if (!std::holds_alternative<GeneralForm>(form_)) throw ModelKindError("levy_model: model is not a general form");
  return std::get<GeneralForm>(form_);
}

const AverageForm& MeanFieldModel::average() const {
  if (!std::holds_alternative<AverageForm>(form_)) throw ModelKindError("levy_model: model is not an average form");
  return std::get<AverageForm>(form_);
}

MeasureDependence MeanFieldModel::dependence() const noexcept {
  if (const auto* g = std::get_if<GeneralForm>(&form_)) return g->dependence;
  return std::get<AverageForm>(form_).affine_in_z() ? MeasureDependence::MeanOnly : MeasureDependence::Full;
}

namespace {

Vec average_vec(const VecKernel& k, const Vec& x, const PointCloud& mu) {
  Vec acc = k.f(x, mu.point(0));
  for (std::size_t j = 1; j < mu.size(); ++j) acc += k.f(x, mu.point(j));
  return acc / static_cast<double>(mu.size());
}

Mat average_mat(const MatKernel& k, const Vec& x, const PointCloud& mu) {
  Mat acc = k.f(x, mu.point(0));
  for (std::size_t j = 1; j < mu.size(); ++j) acc += k.f(x, mu.point(j));
  return acc / static_cast<double>(mu.size());
}

CoefficientTuple average_all(const AverageForm& a, const Vec& x, const PointCloud& mu) {
  return {average_vec(a.b, x, mu), average_mat(a.sigma, x, mu), average_mat(a.eta, x, mu)};
}

void check_point(const MeanFieldModel& model, const Vec& x, const PointCloud& mu) {
  if (mu.empty()) throw EmptyMeasureError("levy_model: coefficients need a nonempty measure");
  if (static_cast<std::size_t>(x.size()) != model.dim() || mu.dim() != model.dim()) {
    throw DimError("levy_model: point or measure dimension differs from the model");
  }
}

}  // namespace

MeanFieldModel MeanFieldModel::as_general() const {
  if (!is_average_form()) return *this;
  const AverageForm a = average();
  GeneralForm g;
  g.b = [a](const Vec& x, const PointCloud& mu) { return average_vec(a.b, x, mu); };
  g.sigma = [a](const Vec& x, const PointCloud& mu) { return average_mat(a.sigma, x, mu); };
  g.eta = [a](const Vec& x, const PointCloud& mu) { return average_mat(a.eta, x, mu); };
  g.dependence = dependence();
  return MeanFieldModel(dim_, std::move(g), base_jump_, lipschitz_, id_);
}

CoefficientTuple evaluate_coefficients(const MeanFieldModel& model, const Vec& x, const PointCloud& mu) {
  check_point(model, x, mu);
  if (model.is_average_form()) return average_all(model.average(), x, mu);
  const auto& g = model.general();
  return {g.b(x, mu), g.sigma(x, mu), g.eta(x, mu)};
}

BoundMeasure::BoundMeasure(const MeanFieldModel& model, const PointCloud& cloud)
    : model_(model), cloud_(cloud), dep_(model.dependence()) {
  if (cloud.empty()) throw EmptyMeasureError("levy_model: coefficients need a nonempty measure");
  if (cloud.dim() != model.dim()) throw DimError("levy_model: measure dimension differs from the model");
  if (dep_ == MeasureDependence::MeanOnly) {
    sum_ = Vec::Zero(static_cast<Eigen::Index>(cloud.dim()));
    for (std::size_t j = 0; j < cloud.size(); ++j) sum_ += cloud.point(j);
    const Vec mean = sum_ / static_cast<double>(cloud.size());
    mean_cloud_ = PointCloud(cloud.dim(), std::vector<double>(mean.data(), mean.data() + mean.size()));
  }
}

CoefficientTuple BoundMeasure::at(const Vec& x) const {
  if (dep_ == MeasureDependence::MeanOnly) {
    if (model_.is_average_form()) {
      const auto& a = model_.average();
      const Vec m = mean_cloud_.point(0);
      return {a.b.f(x, m), a.sigma.f(x, m), a.eta.f(x, m)};
    }
    const auto& g = model_.general();
    return {g.b(x, mean_cloud_), g.sigma(x, mean_cloud_), g.eta(x, mean_cloud_)};
  }
  if (model_.is_average_form()) return average_all(model_.average(), x, cloud_);
  const auto& g = model_.general();
  return {g.b(x, cloud_), g.sigma(x, cloud_), g.eta(x, cloud_)};
}

CoefficientTuple BoundMeasure::leave_one_out(std::size_t i) const {
  const std::size_t n = cloud_.size();
  if (n < 2) throw SizeError("simulator: the truncated empirical measure needs N >= 2");
  const Vec x = cloud_.point(i);
  if (dep_ == MeasureDependence::None) return at(x);
  if (dep_ == MeasureDependence::MeanOnly) {
    const Vec m = (sum_ - x) / static_cast<double>(n - 1);
    if (model_.is_average_form()) {
      const auto& a = model_.average();
      return {a.b.f(x, m), a.sigma.f(x, m), a.eta.f(x, m)};
    }
    const PointCloud mc(cloud_.dim(), std::vector<double>(m.data(), m.data() + m.size()));
    const auto& g = model_.general();
    return {g.b(x, mc), g.sigma(x, mc), g.eta(x, mc)};
  }
  if (model_.is_average_form()) {
    const auto& a = model_.average();
    std::size_t first = i == 0 ? 1 : 0;
    Vec b = a.b.f(x, cloud_.point(first));
    Mat s = a.sigma.f(x, cloud_.point(first));
    Mat e = a.eta.f(x, cloud_.point(first));
    for (std::size_t j = first + 1; j < n; ++j) {
      if (j == i) continue;
      const Vec z = cloud_.point(j);
      b += a.b.f(x, z);
      s += a.sigma.f(x, z);
      e += a.eta.f(x, z);
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    return {b * inv, s * inv, e * inv};
  }
  std::vector<double> coords;
  coords.reserve((n - 1) * cloud_.dim());
  const auto src = cloud_.coords();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    coords.insert(coords.end(), src.begin() + static_cast<std::ptrdiff_t>(j * cloud_.dim()),
                  src.begin() + static_cast<std::ptrdiff_t>((j + 1) * cloud_.dim()));
  }
  const PointCloud rest(cloud_.dim(), std::move(coords));
  const auto& g = model_.general();
  return {g.b(x, rest), g.sigma(x, rest), g.eta(x, rest)};
}

double generator_apply(const MeanFieldModel& model, const TestFunction& phi, const Vec& x, const PointCloud& mu) {
  const CoefficientTuple tau = evaluate_coefficients(model, x, mu);
  const Vec grad = phi.gradient(x);
  const Mat hess = phi.hessian(x);
  const Mat a = tau.sigma * tau.sigma.transpose();
  double out = tau.b.dot(grad) + 0.5 * (a * hess).trace();
  if (model.has_jumps()) {
    const double fx = phi.value(x);
    for (const auto& atom : model.base_jump()->atoms()) {
      const Vec jump = tau.eta * atom.z;
      out += atom.lambda * (phi.value(x + jump) - fx - jump.dot(grad));
    }
  }
  return out;
}

double sigma_functional(const MeanFieldModel& model, const Vec& x, const PointCloud& mu, const PointCloud& nu) {
  if (!model.is_average_form()) throw ModelKindError("levy_model: sigma_functional requires an average-form model");
  check_point(model, x, mu);
  check_point(model, x, nu);
  const auto& a = model.average();
  const CoefficientTuple d = average_all(a, x, mu) - average_all(a, x, nu);
  return std::sqrt(d.b.squaredNorm() + d.sigma.squaredNorm() + d.eta.squaredNorm());
}

namespace {

Vec normal_vec(Stream& s, std::size_t d, double scale) {
  Vec v(static_cast<Eigen::Index>(d));
  for (auto& c : v) c = scale * s.normal();
  return v;
}

PointCloud random_cloud(Stream& s, std::size_t d, std::size_t m) {
  const Vec center = normal_vec(s, d, 2.0);
  const double spread = 0.25 + 1.5 * s.uniform();
  std::vector<double> coords(d * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = center(static_cast<Eigen::Index>(k)) + spread * s.normal();
  }
  return PointCloud(d, std::move(coords));
}

}  // namespace

LipschitzProbe lipschitz_probe(const MeanFieldModel& model, std::size_t sample_count, std::uint64_t seed) {
  constexpr std::size_t kCloudSize = 6;
  const std::size_t d = model.dim();
  LipschitzProbe out;
  for (std::size_t s = 0; s < sample_count; ++s) {
    Stream rng(seed, 0, s, 0);
    const Vec x = normal_vec(rng, d, 2.0);
    const PointCloud mu = random_cloud(rng, d, kCloudSize);
    PointCloud nu = random_cloud(rng, d, kCloudSize);
    if (s % 2 == 1) {
      // small perturbations probe the local ratio
      auto c = mu.coords();
      std::vector<double> v(c.begin(), c.end());
      for (auto& e : v) e += 0.05 * rng.normal();
      nu = PointCloud(d, std::move(v));
    }
    const double c2 = exact_w2_assignment(mu, nu).cost;
    if (c2 > 1e-14) {
      const double num = vnorm_sq(evaluate_coefficients(model, x, mu) - evaluate_coefficients(model, x, nu));
      out.alpha_hat = std::max(out.alpha_hat, num / c2);
    }
    const Vec y = s % 2 == 1 ? Vec(x + normal_vec(rng, d, 0.05)) : normal_vec(rng, d, 2.0);
    const double half_sq = 0.5 * (x - y).squaredNorm();
    if (half_sq > 1e-14) {
      const double num = vnorm_sq(evaluate_coefficients(model, x, mu) - evaluate_coefficients(model, y, mu));
      out.beta_hat = std::max(out.beta_hat, num / half_sq);
    }
  }
  if (const auto& lp = model.lipschitz()) {
    if (out.alpha_hat > 1.05 * lp->alpha) {
      out.flagged = true;
      out.note += "alpha_hat exceeds declared alpha; ";
    }
    if (out.beta_hat > 1.05 * lp->beta) {
      out.flagged = true;
      out.note += "beta_hat exceeds declared beta; ";
    }
  }
  return out;
}

}  // namespace mfchaos
