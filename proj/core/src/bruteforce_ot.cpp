#include <cmath>
#include <limits>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

namespace {

constexpr double kPivotTol = 1e-12;

// Dense tableau simplex with Bland's rule. Rows 0..m-1 are constraints,
// row m is the objective (reduced costs); column `ncols` holds the rhs.
class Tableau {
 public:
  Tableau(const Mat& a, const Vec& b, const Vec& cost)
      : m_(a.rows()), n_(a.cols()), t_(Mat::Zero(a.rows() + 1, a.cols() + a.rows() + 1)),
        basis_(static_cast<std::size_t>(a.rows())) {
    const Eigen::Index width = n_ + m_;
    t_.topLeftCorner(m_, n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(width).head(m_) = b;
    for (Eigen::Index r = 0; r < m_; ++r) basis_[static_cast<std::size_t>(r)] = n_ + r;
    cost_ = cost;
  }

  /// Phase 1 minimises the artificial sum, phase 2 the true cost.
  Vec solve() {
    const Eigen::Index width = n_ + m_;
    // phase 1 objective: sum of artificials, expressed in nonbasic terms
    t_.row(m_).setZero();
    for (Eigen::Index r = 0; r < m_; ++r) {
      t_.row(m_).head(n_) -= t_.row(r).head(n_);
      t_(m_, width) -= t_(r, width);
    }
    run(width);
    if (std::abs(t_(m_, width)) > 1e-9) throw ParamError("ot_core: transport LP is infeasible");

    // pivot remaining artificials out of the basis
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(r, j)) > kPivotTol) {
          pivot(r, j);
          break;
        }
      }
    }

    // phase 2: artificials are barred from re-entering
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = cost_.transpose();
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index bv = basis_[static_cast<std::size_t>(r)];
      if (bv < n_) t_.row(m_) -= cost_(bv) * t_.row(r);
    }
    run(n_);

    Vec x = Vec::Zero(n_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index bv = basis_[static_cast<std::size_t>(r)];
      if (bv < n_) x(bv) = t_(r, width);
    }
    return x;
  }

 private:
  void run(Eigen::Index entering_limit) {
    const Eigen::Index width = n_ + m_;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        if (t_(m_, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m_; ++r) {
        if (t_(r, enter) > kPivotTol) {
          const double ratio = t_(r, width) / t_(r, enter);
          const bool better = ratio < best - kPivotTol;
          const bool tie = std::abs(ratio - best) <= kPivotTol && leave >= 0 &&
                           basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)];
          if (better || tie) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) throw ParamError("ot_core: transport LP is unbounded");
      pivot(leave, enter);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  Eigen::Index m_, n_;
  Mat t_;
  std::vector<Eigen::Index> basis_;
  Vec cost_;
};

}  // namespace

DenseResult bruteforce_ot(const WeightedCloud& mu, const WeightedCloud& nu) {
  if (mu.dim() != nu.dim()) throw DimError("ot_core: bruteforce_ot: dimensions differ");
  const std::size_t m = mu.size(), n = nu.size();
  if (m == 0 || n == 0) throw EmptyMeasureError("ot_core: bruteforce_ot: empty measure");
  if (m * n > kBruteforceMaxCells) {
    throw ScaleError("ot_core: bruteforce_ot: " + std::to_string(m) + "x" + std::to_string(n) +
                     " exceeds the oracle limit of " + std::to_string(kBruteforceMaxCells) + " cells");
  }

  const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);
  // row sums (m constraints) and column sums except the last (redundant)
  const Eigen::Index rows = mi + ni - 1;
  Mat a = Mat::Zero(rows, mi * ni);
  Vec b(rows), cost(mi * ni);
  for (Eigen::Index i = 0; i < mi; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      const Eigen::Index var = i * ni + j;
      a(i, var) = 1.0;
      if (j + 1 < ni) a(mi + j, var) = 1.0;
      cost(var) = half_sq_dist(mu.point(static_cast<std::size_t>(i)), nu.point(static_cast<std::size_t>(j)));
    }
    b(i) = mu.weight(static_cast<std::size_t>(i));
  }
  for (Eigen::Index j = 0; j + 1 < ni; ++j) b(mi + j) = nu.weight(static_cast<std::size_t>(j));

  Tableau tab(a, b, cost);
  const Vec x = tab.solve();

  DenseResult out;
  out.plan.mass = Mat::Zero(mi, ni);
  double total = 0.0;
  for (Eigen::Index i = 0; i < mi; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double p = std::max(0.0, x(i * ni + j));
      out.plan.mass(i, j) = p;
      total += p * cost(i * ni + j);
    }
  }
  out.cost = total;
  return out;
}

}  // namespace mfchaos
