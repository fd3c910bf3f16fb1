#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

namespace {

void check_psd(const Mat& a, const char* name) {
  if (a.rows() != a.cols()) throw DimError(std::string("ot_core: ") + name + " is not square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kMatrixTol) {
    throw MatrixError(std::string("ot_core: ") + name + " is not symmetric");
  }
}

void check_spectrum(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  if (a.rows() > 0 && es.eigenvalues().minCoeff() < -kMatrixTol) {
    throw MatrixError("ot_core: matrix has a negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
}

}  // namespace

Mat sqrtm_psd(const Mat& a) {
  check_psd(a, "matrix");
  const Mat sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  Vec ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -kMatrixTol) {
    throw MatrixError("ot_core: matrix has a negative eigenvalue " + std::to_string(ev.minCoeff()));
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double bures_wasserstein_sq(const Mat& a, const Mat& b) {
  check_psd(a, "first matrix");
  check_psd(b, "second matrix");
  if (a.rows() != b.rows()) throw DimError("ot_core: bures_wasserstein: dimensions differ");
  check_spectrum(a);
  const Mat sb = sqrtm_psd(b);
  if ((a - b).norm() <= 1e-8) return 0.0;
  const Mat inner = sb * a * sb;
  const Mat cross = sqrtm_psd(0.5 * (inner + inner.transpose()));
  const double v = 0.5 * (a.trace() + b.trace() - 2.0 * cross.trace());
  return std::max(0.0, v);
}

double bures_wasserstein(const Mat& a, const Mat& b) { return std::sqrt(bures_wasserstein_sq(a, b)); }

double gaussian_w2(const Vec& x0, const Mat& a, const Vec& y0, const Mat& b) {
  if (x0.size() != y0.size() || x0.size() != a.rows()) throw DimError("ot_core: gaussian_w2: dimensions differ");
  return 0.5 * (x0 - y0).squaredNorm() + bures_wasserstein_sq(a, b);
}

}  // namespace mfchaos
