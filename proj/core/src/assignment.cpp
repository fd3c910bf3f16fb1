#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const PointCloud& mu, const PointCloud& nu, const char* what) {
  if (mu.dim() != nu.dim()) {
    throw DimError(std::string("ot_core: ") + what + ": dimensions " + std::to_string(mu.dim()) +
                   " and " + std::to_string(nu.dim()) + " differ");
  }
  if (mu.size() != nu.size()) {
    throw SizeError(std::string("ot_core: ") + what + ": sizes " + std::to_string(mu.size()) +
                    " and " + std::to_string(nu.size()) + " differ");
  }
}

// Jonker-Volgenant: column reduction, reduction transfer, two rounds of
// augmenting row reduction, then shortest augmenting paths for the rest.
std::vector<std::size_t> lapjv(const Mat& cost) {
  const int n = static_cast<int>(cost.rows());
  // rows are scanned far more often than columns
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c = cost;
  std::vector<int> rowsol(n, -1), colsol(n, -1), matches(n, 0), free_rows(n), collist(n), pred(n);
  std::vector<double> v(n), d(n);

  for (int j = n - 1; j >= 0; --j) {
    int imin = 0;
    double mn = c(0, j);
    for (int i = 1; i < n; ++i) {
      if (c(i, j) < mn) {
        mn = c(i, j);
        imin = i;
      }
    }
    v[j] = mn;
    if (++matches[imin] == 1) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else {
      colsol[j] = -1;
    }
  }

  int numfree = 0;
  for (int i = 0; i < n; ++i) {
    if (matches[i] == 0) {
      free_rows[numfree++] = i;
    } else if (matches[i] == 1) {
      const int j1 = rowsol[i];
      double mn = kInf;
      for (int j = 0; j < n; ++j) {
        if (j != j1) mn = std::min(mn, c(i, j) - v[j]);
      }
      if (mn < kInf) v[j1] -= mn;
    }
  }

  for (int loop = 0; loop < 2; ++loop) {
    int k = 0;
    const int prvnumfree = numfree;
    numfree = 0;
    std::size_t guard = 0;
    // the reduction rounds can cycle for a long time on near-ties; leftovers go to augmentation
    const std::size_t guard_max = 4 * static_cast<std::size_t>(n) + 16;
    while (k < prvnumfree) {
      const int i = free_rows[k++];
      if (++guard > guard_max) {
        free_rows[numfree++] = i;
        continue;
      }
      double umin = c(i, 0) - v[0];
      double usubmin = kInf;
      int j1 = 0, j2 = -1;
      for (int j = 1; j < n; ++j) {
        const double h = c(i, j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }
      int i0 = colsol[j1];
      const bool strict = umin < usubmin;
      if (strict) {
        v[j1] -= usubmin - umin;
      } else if (i0 > -1 && j2 >= 0) {
        j1 = j2;
        i0 = colsol[j2];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 > -1) {
        rowsol[i0] = -1;
        if (strict) {
          free_rows[--k] = i0;
        } else {
          free_rows[numfree++] = i0;
        }
      }
    }
  }

  for (int f = 0; f < numfree; ++f) {
    const int freerow = free_rows[f];
    for (int j = 0; j < n; ++j) {
      d[j] = c(freerow, j) - v[j];
      pred[j] = freerow;
      collist[j] = j;
    }
    int low = 0, up = 0, last = 0, endofpath = -1;
    double mn = 0.0;
    bool found = false;
    while (!found) {
      if (up == low) {
        last = low - 1;
        mn = d[collist[up++]];
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double h = d[j];
          if (h <= mn) {
            if (h < mn) {
              up = low;
              mn = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k = low; k < up; ++k) {
          if (colsol[collist[k]] < 0) {
            endofpath = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const double h = c(i, j1) - v[j1] - mn;
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double v2 = c(i, j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == mn) {
              if (colsol[j] < 0) {
                endofpath = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    }
    for (int k = 0; k <= last; ++k) {
      const int j1 = collist[k];
      v[j1] += d[j1] - mn;
    }
    int i = -1;
    do {
      i = pred[endofpath];
      colsol[endofpath] = i;
      const int j1 = endofpath;
      endofpath = rowsol[i];
      rowsol[i] = j1;
    } while (i != freerow);
  }

  std::vector<std::size_t> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = static_cast<std::size_t>(rowsol[i]);
  return perm;
}

std::vector<std::size_t> sorted_matching(const PointCloud& mu, const PointCloud& nu) {
  const std::size_t n = mu.size();
  std::vector<std::size_t> a(n), b(n);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  const auto xs = mu.coords();
  const auto ys = nu.coords();
  std::stable_sort(a.begin(), a.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::stable_sort(b.begin(), b.end(), [&](std::size_t i, std::size_t j) { return ys[i] < ys[j]; });
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[a[k]] = b[k];
  return perm;
}

}  // namespace

std::vector<std::size_t> solve_lap(const Mat& cost) {
  if (cost.rows() != cost.cols()) throw SizeError("ot_core: assignment cost matrix must be square");
  if (cost.rows() == 0) return {};
  if (cost.rows() == 1) return {0};
  return lapjv(cost);
}

AssignmentResult exact_w2_assignment(const PointCloud& mu, const PointCloud& nu,
                                     AssignmentSolver solver) {
  check_pair(mu, nu, "exact_w2_assignment");
  const std::size_t n = mu.size();
  if (solver == AssignmentSolver::Auto) {
    solver = mu.dim() == 1 ? AssignmentSolver::Sorted : AssignmentSolver::Lapjv;
  }
  if (solver == AssignmentSolver::Sorted && mu.dim() != 1) {
    throw DimError("ot_core: sorted matching requires d = 1");
  }

  AssignmentResult out;
  if (solver == AssignmentSolver::Sorted) {
    out.plan.perm = sorted_matching(mu, nu);
  } else {
    Mat c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            half_sq_dist(mu.point(i), nu.point(j));
      }
    }
    out.plan.perm = solve_lap(c);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += half_sq_dist(mu.point(i), nu.point(out.plan.perm[i]));
  out.cost = total / static_cast<double>(n);
  return out;
}

double tensorized_cost(const PointCloud& x, const PointCloud& y) {
  check_pair(x, y, "tensorized_cost");
  double total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) total += half_sq_dist(x.point(k), y.point(k));
  return total / static_cast<double>(x.size());
}

double tensor_product_upper_bound(const std::vector<std::pair<PointCloud, PointCloud>>& pairs) {
  if (pairs.empty()) throw SizeError("ot_core: tensor_product_upper_bound needs at least one pair");
  const std::size_t d = pairs.front().first.dim();
  double total = 0.0;
  for (const auto& [mu, nu] : pairs) {
    if (mu.dim() != d || nu.dim() != d) throw DimError("ot_core: pairs must share one dimension");
    total += exact_w2_assignment(mu, nu).cost;
  }
  return total / static_cast<double>(pairs.size());
}

}  // namespace mfchaos
