#include "mfchaos/kernels.hpp"

namespace mfchaos::kernels {

namespace {

Vec mean_of(const PointCloud& mu) { return mu.size() == 1 ? Vec(mu.point(0)) : mu.mean(); }

}  // namespace

VecKernel linear_attraction(double kappa) {
  return {[kappa](const Vec& x, const Vec& z) -> Vec { return kappa * (z - x); }, true};
}

VecKernel zero_drift(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {[d](const Vec&, const Vec&) -> Vec { return Vec::Zero(d); }, true};
}

MatKernel constant_sigma(std::size_t dim, double s) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {[d, s](const Vec&, const Vec&) -> Mat { return s * Mat::Identity(d, d); }, true};
}

MatKernel linear_eta(std::size_t dim, double eta0, double eta1) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {[d, eta0, eta1](const Vec& x, const Vec& z) -> Mat {
            Mat m = eta0 * Mat::Identity(d, d);
            m.diagonal() += eta1 * (z - x);
            return m;
          },
          true};
}

MatKernel zero_matrix(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {[d](const Vec&, const Vec&) -> Mat { return Mat::Zero(d, d); }, true};
}

LipschitzParams average_form_constants(double kappa, double eta1) {
  // |a - b|^2 <= 2|a|^2 + 2|b|^2 and |mean(mu) - mean(nu)|^2 <= 2 C2(mu, nu)
  const double k2 = kappa * kappa + eta1 * eta1;
  return {2.0 * k2, 2.0 * k2, 2.0 * k2, 0.0};
}

GeneralForm ou(std::size_t dim, double theta, double s, double eta0) {
  const auto d = static_cast<Eigen::Index>(dim);
  GeneralForm g;
  g.b = [theta](const Vec& x, const PointCloud&) -> Vec { return -theta * x; };
  g.sigma = [d, s](const Vec&, const PointCloud&) -> Mat { return s * Mat::Identity(d, d); };
  g.eta = [d, eta0](const Vec&, const PointCloud&) -> Mat { return eta0 * Mat::Identity(d, d); };
  g.dependence = MeasureDependence::None;
  return g;
}

GeneralForm mean_attraction(std::size_t dim, double kappa, double s, double eta0) {
  const auto d = static_cast<Eigen::Index>(dim);
  GeneralForm g;
  g.b = [kappa](const Vec& x, const PointCloud& mu) -> Vec { return kappa * (mean_of(mu) - x); };
  g.sigma = [d, s](const Vec&, const PointCloud&) -> Mat { return s * Mat::Identity(d, d); };
  g.eta = [d, eta0](const Vec&, const PointCloud&) -> Mat { return eta0 * Mat::Identity(d, d); };
  g.dependence = MeasureDependence::MeanOnly;
  return g;
}

GeneralForm mean_ramp(std::size_t dim, double s) {
  const auto d = static_cast<Eigen::Index>(dim);
  GeneralForm g;
  g.b = [](const Vec& x, const PointCloud& mu) -> Vec { return -(1.0 + mean_of(mu).mean()) * x; };
  g.sigma = [d, s](const Vec&, const PointCloud&) -> Mat { return s * Mat::Identity(d, d); };
  g.eta = [d](const Vec&, const PointCloud&) -> Mat { return Mat::Zero(d, d); };
  g.dependence = MeasureDependence::MeanOnly;
  return g;
}

GeneralForm zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  GeneralForm g;
  g.b = [d](const Vec&, const PointCloud&) -> Vec { return Vec::Zero(d); };
  g.sigma = [d](const Vec&, const PointCloud&) -> Mat { return Mat::Zero(d, d); };
  g.eta = [d](const Vec&, const PointCloud&) -> Mat { return Mat::Zero(d, d); };
  g.dependence = MeasureDependence::None;
  return g;
}

}  // namespace mfchaos::kernels
