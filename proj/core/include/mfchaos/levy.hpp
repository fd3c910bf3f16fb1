#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mfchaos/cloud.hpp"

namespace mfchaos {

struct LevyAtom {
  Vec z;
  double lambda = 0.0;
};

/// Finite-atom Levy measure sum_k lambda_k delta_{z_k}; no atom at the origin.
class DiscreteLevyMeasure {
 public:
  DiscreteLevyMeasure() = default;
  explicit DiscreteLevyMeasure(std::size_t dim) : dim_(dim) {}
  DiscreteLevyMeasure(std::size_t dim, std::vector<LevyAtom> atoms);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const std::vector<LevyAtom>& atoms() const noexcept { return atoms_; }
  const LevyAtom& atom(std::size_t k) const { return atoms_[k]; }

  /// sum_k lambda_k
  double total_intensity() const;
  /// m1 = sum_k lambda_k z_k, the compensator drift of the global form.
  Vec first_moment() const;
  /// m2 = sum_k lambda_k |z_k|^2.
  double second_moment() const;

  /// eta_# Omega; atoms mapped to the origin are dropped.
  DiscreteLevyMeasure pushforward(const Mat& eta) const;

  friend bool operator==(const DiscreteLevyMeasure& a, const DiscreteLevyMeasure& b);

 private:
  std::size_t dim_ = 0;
  std::vector<LevyAtom> atoms_;
};

struct JumpPart {
  Mat eta;
  DiscreteLevyMeasure base;
};

/// (b, a = sigma sigma^T, Theta = eta_# Omega) in global untruncated form.
struct LevyTriplet {
  Vec b;
  Mat sigma;
  std::optional<JumpPart> jump;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(b.size()); }
  Mat diffusion() const { return sigma * sigma.transpose(); }
  /// Theta, or the empty measure when there is no jump part.
  DiscreteLevyMeasure jump_measure() const;
  void validate() const;
};

/// 1/2 sum_k lambda_k |sigma z_k - sigma_tilde z_k|^2.
double levy_pushforward_cost(const Mat& sigma, const Mat& sigma_tilde, const DiscreteLevyMeasure& omega);

/// 1/2 m2(theta) + 1/2 m2(theta_tilde).
double trivial_coupling_cost(const DiscreteLevyMeasure& theta, const DiscreteLevyMeasure& theta_tilde);

/// Best constructive upper bound on W_Lambda^2 between the two jump parts.
double levy_coupling_bound(const LevyTriplet& a, const LevyTriplet& b);

/// W_G^2 = 1/2 |b - b~|^2 + W_S(a, a~)^2 + (upper bound on W_Lambda^2).
double generator_metric_wg_sq(const LevyTriplet& a, const LevyTriplet& b);
double generator_metric_wg(const LevyTriplet& a, const LevyTriplet& b);

}  // namespace mfchaos
