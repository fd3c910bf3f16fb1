#include "mfchaos/levy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

DiscreteLevyMeasure::DiscreteLevyMeasure(std::size_t dim, std::vector<LevyAtom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  if (dim_ == 0) throw DimError("ot_core: Levy measure dimension must be positive");
  for (const auto& a : atoms_) {
    if (static_cast<std::size_t>(a.z.size()) != dim_) throw DimError("ot_core: Levy atom has wrong dimension");
    if (!a.z.allFinite()) throw ParamError("ot_core: Levy atom is not finite");
    if (a.z.squaredNorm() == 0.0) throw ParamError("ot_core: Levy measure has an atom at the origin");
    if (!(a.lambda > 0.0) || !std::isfinite(a.lambda)) {
      throw ParamError("ot_core: Levy atom intensity must be positive");
    }
  }
}

double DiscreteLevyMeasure::total_intensity() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.lambda;
  return s;
}

Vec DiscreteLevyMeasure::first_moment() const {
  Vec m = Vec::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& a : atoms_) m += a.lambda * a.z;
  return m;
}

double DiscreteLevyMeasure::second_moment() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.lambda * a.z.squaredNorm();
  return s;
}

DiscreteLevyMeasure DiscreteLevyMeasure::pushforward(const Mat& eta) const {
  if (static_cast<std::size_t>(eta.cols()) != dim_) throw DimError("ot_core: pushforward matrix has wrong width");
  std::vector<LevyAtom> out;
  for (const auto& a : atoms_) {
    Vec z = eta * a.z;
    if (z.squaredNorm() > 0.0) out.push_back({std::move(z), a.lambda});
  }
  return DiscreteLevyMeasure(static_cast<std::size_t>(eta.rows()), std::move(out));
}

bool operator==(const DiscreteLevyMeasure& a, const DiscreteLevyMeasure& b) {
  if (a.dim_ != b.dim_ || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t k = 0; k < a.atoms_.size(); ++k) {
    if (a.atoms_[k].lambda != b.atoms_[k].lambda || a.atoms_[k].z != b.atoms_[k].z) return false;
  }
  return true;
}

DiscreteLevyMeasure LevyTriplet::jump_measure() const {
  if (!jump) return DiscreteLevyMeasure(dim());
  return jump->base.pushforward(jump->eta);
}

void LevyTriplet::validate() const {
  const auto d = b.size();
  if (d == 0) throw DimError("levy_model: triplet dimension must be positive");
  if (sigma.rows() != d || sigma.cols() != d) throw DimError("levy_model: sigma must be d x d");
  if (jump) {
    if (jump->eta.rows() != d || jump->eta.cols() != d) throw DimError("levy_model: eta must be d x d");
    if (jump->base.dim() != static_cast<std::size_t>(d)) throw DimError("levy_model: jump base has wrong dimension");
  }
}

double levy_pushforward_cost(const Mat& sigma, const Mat& sigma_tilde, const DiscreteLevyMeasure& omega) {
  if (sigma.rows() != sigma_tilde.rows() || sigma.cols() != sigma_tilde.cols() ||
      static_cast<std::size_t>(sigma.cols()) != omega.dim()) {
    throw DimError("ot_core: levy_pushforward_cost: dimensions differ");
  }
  const Mat diff = sigma - sigma_tilde;
  double cost = 0.0;
  for (const auto& a : omega.atoms()) cost += a.lambda * (diff * a.z).squaredNorm();
  cost *= 0.5;
  const double bound = 0.5 * diff.squaredNorm() * omega.second_moment();
  if (cost > bound * (1.0 + 1e-12) + 1e-300) {
    throw Error("ot_core: levy_pushforward_cost exceeded its Frobenius bound");
  }
  return cost;
}

double trivial_coupling_cost(const DiscreteLevyMeasure& theta, const DiscreteLevyMeasure& theta_tilde) {
  if (theta.dim() != theta_tilde.dim()) throw DimError("ot_core: trivial_coupling_cost: dimensions differ");
  return 0.5 * theta.second_moment() + 0.5 * theta_tilde.second_moment();
}

double levy_coupling_bound(const LevyTriplet& a, const LevyTriplet& b) {
  if (a.dim() != b.dim()) throw DimError("ot_core: triplets have different dimensions");
  if (!a.jump && !b.jump) return 0.0;
  const double trivial = trivial_coupling_cost(a.jump_measure(), b.jump_measure());
  if (a.jump && b.jump && a.jump->base == b.jump->base) {
    return std::min(trivial, levy_pushforward_cost(a.jump->eta, b.jump->eta, a.jump->base));
  }
  return trivial;
}

double generator_metric_wg_sq(const LevyTriplet& a, const LevyTriplet& b) {
  a.validate();
  b.validate();
  if (a.dim() != b.dim()) throw DimError("ot_core: triplets have different dimensions");
  return 0.5 * (a.b - b.b).squaredNorm() + bures_wasserstein_sq(a.diffusion(), b.diffusion()) +
         levy_coupling_bound(a, b);
}

double generator_metric_wg(const LevyTriplet& a, const LevyTriplet& b) {
  return std::sqrt(generator_metric_wg_sq(a, b));
}

}  // namespace mfchaos
