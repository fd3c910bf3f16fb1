#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "mfchaos/cloud.hpp"
#include "mfchaos/levy.hpp"

namespace mfchaos {

/// tau = (b, sigma, eta), an element of R^d x M_d x M_d.
struct CoefficientTuple {
  Vec b;
  Mat sigma;
  Mat eta;
};

CoefficientTuple operator-(const CoefficientTuple& a, const CoefficientTuple& b);
CoefficientTuple operator*(double c, const CoefficientTuple& t);

/// ||tau||_V^2 = 1/2 |b|^2 + 1/2 |sigma|_F^2 + 1/2 |eta|_F^2.
double vnorm_sq(const CoefficientTuple& t);
double vnorm(const CoefficientTuple& t);

/// How a coefficient field depends on its measure argument. MeanOnly fields
/// may be evaluated against the one-point cloud at the mean.
enum class MeasureDependence { None, MeanOnly, Full };

using VecField = std::function<Vec(const Vec& x, const PointCloud& mu)>;
using MatField = std::function<Mat(const Vec& x, const PointCloud& mu)>;

struct GeneralForm {
  VecField b;
  MatField sigma;
  MatField eta;
  MeasureDependence dependence = MeasureDependence::Full;
};

struct VecKernel {
  std::function<Vec(const Vec& x, const Vec& z)> f;
  bool affine_in_z = false;
};

struct MatKernel {
  std::function<Mat(const Vec& x, const Vec& z)> f;
  bool affine_in_z = false;
};

/// Coefficients b(x, mu) = int b~(x, z) dmu(z), likewise sigma and eta.
struct AverageForm {
  VecKernel b;
  MatKernel sigma;
  MatKernel eta;
  bool affine_in_z() const { return b.affine_in_z && sigma.affine_in_z && eta.affine_in_z; }
};

/// Declared constants: |tau(x,mu) - tau(y,nu)|_V^2 <= alpha C2(mu,nu) + beta/2 |x-y|^2,
/// and for average forms Sigma^2 <= m C2 and |Sigma(x) - Sigma(y)| <= m_prime |x - y|.
struct LipschitzParams {
  double alpha = 0.0;
  double beta = 0.0;
  double m = 0.0;
  double m_prime = 0.0;
};

class MeanFieldModel {
 public:
  MeanFieldModel(std::size_t dim, GeneralForm form, std::optional<DiscreteLevyMeasure> base_jump = {},
                 std::optional<LipschitzParams> lipschitz = {}, std::string id = "general");
  MeanFieldModel(std::size_t dim, AverageForm form, std::optional<DiscreteLevyMeasure> base_jump = {},
                 std::optional<LipschitzParams> lipschitz = {}, std::string id = "average_form");

  std::size_t dim() const noexcept { return dim_; }
  bool is_average_form() const noexcept { return std::holds_alternative<AverageForm>(form_); }
  const GeneralForm& general() const;
  const AverageForm& average() const;
  const std::optional<DiscreteLevyMeasure>& base_jump() const noexcept { return base_jump_; }
  bool has_jumps() const noexcept { return base_jump_ && !base_jump_->empty(); }
  const std::optional<LipschitzParams>& lipschitz() const noexcept { return lipschitz_; }
  const std::string& id() const noexcept { return id_; }
  MeasureDependence dependence() const noexcept;

  /// The same model as a General form whose fields average the kernels literally.
  MeanFieldModel as_general() const;

 private:
  std::size_t dim_;
  std::variant<GeneralForm, AverageForm> form_;
  std::optional<DiscreteLevyMeasure> base_jump_;
  std::optional<LipschitzParams> lipschitz_;
  std::string id_;
};

/// Reference evaluation: literal empirical averages for average forms.
CoefficientTuple evaluate_coefficients(const MeanFieldModel& model, const Vec& x, const PointCloud& mu);

/// Coefficients against a fixed empirical measure, with the cheapest exact
/// strategy the model admits. Also serves leave-one-out measures mu(x'_i).
class BoundMeasure {
 public:
  BoundMeasure(const MeanFieldModel& model, const PointCloud& cloud);

  /// tau(x, mu(cloud)).
  CoefficientTuple at(const Vec& x) const;
  /// tau(x_i, mu(cloud without point i)).
  CoefficientTuple leave_one_out(std::size_t i) const;

 private:
  const MeanFieldModel& model_;
  const PointCloud& cloud_;
  MeasureDependence dep_;
  Vec sum_;
  PointCloud mean_cloud_;
};

struct TestFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// b.grad(phi) + 1/2 tr(sigma sigma^T D^2 phi) + sum_k lambda_k [phi(x + eta z_k) - phi(x) - (eta z_k).grad(phi)].
double generator_apply(const MeanFieldModel& model, const TestFunction& phi, const Vec& x, const PointCloud& mu);

/// Sigma(x, mu, nu) for average forms: root of the summed squared differences
/// of the averaged kernels (no factor 1/2).
double sigma_functional(const MeanFieldModel& model, const Vec& x, const PointCloud& mu, const PointCloud& nu);

struct LipschitzProbe {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  bool flagged = false;  ///< a declared constant is exceeded by more than 5%
  std::string note;
};

/// Empirical maxima of ||tau(x,mu) - tau(x,nu)||_V^2 / C2(mu,nu) and of
/// ||tau(x,mu) - tau(y,mu)||_V^2 / (|x-y|^2 / 2) over random samples.
LipschitzProbe lipschitz_probe(const MeanFieldModel& model, std::size_t sample_count, std::uint64_t seed);

}  // namespace mfchaos
