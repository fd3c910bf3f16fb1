#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mfchaos/error.hpp"
#include "mfchaos/ot.hpp"

namespace mfchaos {

namespace {

struct Atom {
  double x;
  double w;
};

std::vector<Atom> sorted_atoms(const WeightedCloud& mu) {
  std::vector<Atom> atoms(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) atoms[i] = {mu.point(i)(0), mu.weight(i)};
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  return atoms;
}

PointCloud replicate(const PointCloud& mu, std::size_t copies) {
  const auto src = mu.coords();
  std::vector<double> coords;
  coords.reserve(src.size() * copies);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t r = 0; r < copies; ++r) {
      coords.insert(coords.end(), src.begin() + static_cast<std::ptrdiff_t>(i * mu.dim()),
                    src.begin() + static_cast<std::ptrdiff_t>((i + 1) * mu.dim()));
    }
  }
  return PointCloud(mu.dim(), std::move(coords));
}

}  // namespace

const char* to_string(CostMethod m) {
  switch (m) {
    case CostMethod::Quantile1D: return "quantile_1d";
    case CostMethod::Assignment: return "assignment";
    case CostMethod::Replicated: return "replicated_assignment";
    case CostMethod::Bruteforce: return "bruteforce";
    case CostMethod::Sinkhorn: return "sinkhorn";
  }
  return "unknown";
}

double w2_1d(const WeightedCloud& mu, const WeightedCloud& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw DimError("ot_core: w2_1d requires d = 1");
  const auto a = sorted_atoms(mu);
  const auto b = sorted_atoms(nu);
  // walk the two quantile functions together
  std::size_t i = 0, j = 0;
  double ra = a[0].w, rb = b[0].w, total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double mass = std::min(ra, rb);
    const double diff = a[i].x - b[j].x;
    total += mass * 0.5 * diff * diff;
    ra -= mass;
    rb -= mass;
    if (ra <= rb) {
      if (++i < a.size()) ra = a[i].w;
    } else {
      if (++j < b.size()) rb = b[j].w;
    }
  }
  return total;
}

double w2_1d(const PointCloud& mu, const PointCloud& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw DimError("ot_core: w2_1d requires d = 1");
  if (mu.size() == nu.size()) return exact_w2_assignment(mu, nu, AssignmentSolver::Sorted).cost;
  // exact rational bookkeeping: work in units of 1/(M*N)
  std::vector<double> xs(mu.coords().begin(), mu.coords().end());
  std::vector<double> ys(nu.coords().begin(), nu.coords().end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t m = xs.size(), n = ys.size();
  std::size_t i = 0, j = 0, ra = n, rb = m;
  double total = 0.0;
  while (i < m && j < n) {
    const std::size_t mass = std::min(ra, rb);
    const double diff = xs[i] - ys[j];
    total += static_cast<double>(mass) * 0.5 * diff * diff;
    ra -= mass;
    rb -= mass;
    if (ra == 0) {
      ++i;
      ra = n;
    }
    if (rb == 0) {
      ++j;
      rb = m;
    }
  }
  return total / (static_cast<double>(m) * static_cast<double>(n));
}

double w2_1d_vs_uniform(const PointCloud& mu, double a, double b) {
  if (mu.dim() != 1) throw DimError("ot_core: w2_1d_vs_uniform requires d = 1");
  if (!(b > a)) throw ParamError("ot_core: uniform law needs a < b");
  std::vector<double> xs(mu.coords().begin(), mu.coords().end());
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / m;
    const double hi = a + (b - a) * static_cast<double>(i + 1) / m;
    const double p = xs[i] - lo, q = xs[i] - hi;
    total += (p * p * p - q * q * q) / 3.0;
  }
  return 0.5 * total / (b - a);
}

CostEstimate transport_cost(const PointCloud& mu, const PointCloud& nu, const TransportOptions& options) {
  if (mu.dim() != nu.dim()) throw DimError("ot_core: transport_cost: dimensions differ");
  if (mu.empty() || nu.empty()) throw EmptyMeasureError("ot_core: transport_cost: empty cloud");
  const std::size_t m = mu.size(), n = nu.size();

  if (mu.dim() == 1) return {w2_1d(mu, nu), true, CostMethod::Quantile1D};
  if (m == n && m <= options.assignment_limit) {
    return {exact_w2_assignment(mu, nu).cost, true, CostMethod::Assignment};
  }
  const std::size_t l = std::lcm(m, n);
  if (l <= options.assignment_limit) {
    const double c = exact_w2_assignment(replicate(mu, l / m), replicate(nu, l / n)).cost;
    return {c, true, CostMethod::Replicated};
  }
  if (m * n <= kBruteforceMaxCells) {
    return {bruteforce_ot(WeightedCloud::uniform(mu), WeightedCloud::uniform(nu)).cost, true,
            CostMethod::Bruteforce};
  }

  double mean_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) mean_cost += half_sq_dist(mu.point(i), nu.point(j));
  }
  mean_cost /= static_cast<double>(m) * static_cast<double>(n);
  const double eps = std::max(options.sinkhorn_relative_epsilon * mean_cost, 1e-12);
  const auto r = sinkhorn_w2(WeightedCloud::uniform(mu), WeightedCloud::uniform(nu), eps,
                             options.sinkhorn_max_iters, options.sinkhorn_tol);
  return {r.cost, false, CostMethod::Sinkhorn};
}

}  // namespace mfchaos
