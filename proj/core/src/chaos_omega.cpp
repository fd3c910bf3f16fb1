#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "mfchaos/chaos.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/mf_solver.hpp"
#include "mfchaos/parallel.hpp"
#include "mfchaos/rng.hpp"

namespace mfchaos {

namespace {

bool positive_definite(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 1e-12;
}

/// T with T a T = b, the optimal linear map from N(0, a) to N(0, b); a must be PD.
Mat gaussian_map(const Mat& a, const Mat& b) {
  const Mat ra = sqrtm_psd(a);
  const Mat ra_inv = ra.inverse();
  const Mat inner = ra * b * ra;
  return ra_inv * sqrtm_psd(0.5 * (inner + inner.transpose())) * ra_inv;
}

struct CouplingPlan {
  Mat ga;  ///< factor applied to the common normal for flow A
  Mat gb;
  bool shared_jumps = false;
};

CouplingPlan plan_coupling(const LevyTriplet& a, const LevyTriplet& b) {
  CouplingPlan p;
  const Mat da = a.diffusion(), db = b.diffusion();
  if (positive_definite(da)) {
    p.ga = a.sigma;
    p.gb = gaussian_map(da, db) * a.sigma;
  } else if (positive_definite(db)) {
    p.ga = gaussian_map(db, da) * b.sigma;
    p.gb = b.sigma;
  } else {
    p.ga = a.sigma;
    p.gb = b.sigma;
  }
  if (a.jump && b.jump && a.jump->base == b.jump->base) {
    const double push = levy_pushforward_cost(a.jump->eta, b.jump->eta, a.jump->base);
    const double triv = trivial_coupling_cost(a.jump_measure(), b.jump_measure());
    p.shared_jumps = push <= triv;
  }
  return p;
}

Vec jump_sum(const JumpPart& jp, double t, Stream& s) {
  Vec acc = Vec::Zero(jp.base.dim() == 0 ? 0 : static_cast<Eigen::Index>(jp.base.dim()));
  for (const auto& atom : jp.base.atoms()) {
    const auto count = s.poisson(atom.lambda * t);
    acc += static_cast<double>(count) * atom.z;
  }
  return acc;
}

std::pair<PointCloud, PointCloud> sample_with_plan(const LevyTriplet& a, const LevyTriplet& b, const CouplingPlan& plan,
                                                   const Vec& x, const Vec& y, double t, std::size_t count,
                                                   std::uint64_t seed, std::uint64_t job) {
  const std::size_t d = a.dim();
  std::vector<double> xa(count * d), xb(count * d);
  const double st = std::sqrt(t);
  const Vec comp_a = a.jump ? Vec(a.jump->eta * a.jump->base.first_moment()) : Vec::Zero(static_cast<Eigen::Index>(d));
  const Vec comp_b = b.jump ? Vec(b.jump->eta * b.jump->base.first_moment()) : Vec::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < count; ++j) {
    Stream g(seed, job, j / 2, 0);
    Vec xi(static_cast<Eigen::Index>(d));
    for (auto& c : xi) c = g.normal();
    if (j % 2 == 1) xi = -xi;  // antithetic partner
    Vec pa = x + t * a.b + st * (plan.ga * xi);
    Vec pb = y + t * b.b + st * (plan.gb * xi);
    if (a.jump) {
      Stream ja(seed, job, j, 1);
      const Vec za = jump_sum(*a.jump, t, ja);
      pa += a.jump->eta * za - t * comp_a;
      if (b.jump && plan.shared_jumps) pb += b.jump->eta * za - t * comp_b;
    }
    if (b.jump && !plan.shared_jumps) {
      Stream jb(seed, job, j, 2);
      pb += b.jump->eta * jump_sum(*b.jump, t, jb) - t * comp_b;
    }
    std::copy(pa.data(), pa.data() + d, xa.begin() + static_cast<std::ptrdiff_t>(j * d));
    std::copy(pb.data(), pb.data() + d, xb.begin() + static_cast<std::ptrdiff_t>(j * d));
  }
  return {PointCloud(d, std::move(xa)), PointCloud(d, std::move(xb))};
}

void check_inputs(const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y, std::size_t mc_size) {
  a.validate();
  b.validate();
  if (a.dim() != b.dim() || static_cast<std::size_t>(x.size()) != a.dim() || static_cast<std::size_t>(y.size()) != a.dim()) {
    throw DimError("chaos_harness: triplets and points must share one dimension");
  }
  if (mc_size < 1000) throw ParamError("chaos_harness: mc_size must be at least 1000");
}

std::uint64_t replicate_job(std::uint64_t job, std::size_t r) { return splitmix64(job) + r; }

// Least-squares intercept of q against dt (plain mean for a single dt).
double intercept(const std::vector<double>& dts, const std::vector<double>& qs) {
  if (dts.size() == 1) return qs.front();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    mx += dts[i];
    my += qs[i];
  }
  mx /= static_cast<double>(dts.size());
  my /= static_cast<double>(dts.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    sxx += (dts[i] - mx) * (dts[i] - mx);
    sxy += (dts[i] - mx) * (qs[i] - my);
  }
  return my - (sxy / sxx) * mx;
}

}  // namespace

std::pair<PointCloud, PointCloud> sample_coupled_flows(const LevyTriplet& a, const LevyTriplet& b, const Vec& x,
                                                       const Vec& y, double t, std::size_t count,
                                                       std::uint64_t seed, std::uint64_t job) {
  a.validate();
  b.validate();
  if (t < 0.0) throw ParamError("chaos_harness: flow time must be nonnegative");
  return sample_with_plan(a, b, plan_coupling(a, b), x, y, t, count, seed, job);
}

OmegaReport omega_probe(const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y,
                        const std::vector<double>& dt_grid, std::size_t mc_size, std::uint64_t seed,
                        const OmegaOptions& options) {
  check_inputs(a, b, x, y, mc_size);
  if (dt_grid.empty()) throw ParamError("chaos_harness: dt_grid is empty");
  for (double dt : dt_grid) {
    if (!(dt > 0.0)) throw ParamError("chaos_harness: dt_grid entries must be positive");
  }
  if (options.replicates < 2) throw ParamError("chaos_harness: omega_probe needs at least two replicates");
  std::vector<double> dts = dt_grid;
  std::sort(dts.begin(), dts.end());
  if (std::adjacent_find(dts.begin(), dts.end()) != dts.end()) throw ParamError("chaos_harness: dt_grid has duplicates");

  OmegaReport rep;
  rep.drift_term = (a.b - b.b).dot(x - y);
  rep.diffusion_term = bures_wasserstein_sq(a.diffusion(), b.diffusion());
  rep.jump_bound = levy_coupling_bound(a, b);
  rep.closed_form = rep.drift_term + rep.diffusion_term + rep.jump_bound;
  rep.closed_form_exact = !(a.jump || b.jump);
  rep.wg_bound = generator_metric_wg_sq(a, b) + 0.5 * (x - y).squaredNorm();

  const CouplingPlan plan = plan_coupling(a, b);
  const double c0 = 0.5 * (x - y).squaredNorm();
  const std::size_t reps = options.replicates;
  std::vector<std::vector<double>> q(reps, std::vector<double>(dts.size()));
  parallel_for(reps, [&](std::size_t r) {
    const std::uint64_t job = replicate_job(options.job, r);
    for (std::size_t i = 0; i < dts.size(); ++i) {
      const auto [pa, pb] = sample_with_plan(a, b, plan, x, y, dts[i], mc_size, seed, job);
      q[r][i] = (tensorized_cost(pa, pb) - c0) / dts[i];
    }
  });

  for (std::size_t i = 0; i < dts.size(); ++i) {
    std::vector<double> col(reps);
    for (std::size_t r = 0; r < reps; ++r) col[r] = q[r][i];
    const auto ms = mean_stderr(col);
    rep.rows.push_back({dts[i], ms.mean, ms.se});
  }
  std::vector<double> icpt(reps);
  for (std::size_t r = 0; r < reps; ++r) icpt[r] = intercept(dts, q[r]);
  const auto ms = mean_stderr(icpt);
  rep.extrapolated = ms.mean;
  rep.extrapolated_se = ms.se;
  rep.tolerance = 3.0 * ms.se + 2.0 * dts.back();
  rep.matches_closed_form = std::abs(rep.extrapolated - rep.closed_form) <= rep.tolerance;
  rep.within_wg_bound = rep.extrapolated <= rep.wg_bound + 3.0 * ms.se;
  return rep;
}

ExpStabilityReport exp_stability_check(const LevyTriplet& a, const LevyTriplet& b, const Vec& x, const Vec& y,
                                       double alpha, double beta, const std::vector<double>& t_grid,
                                       std::size_t mc_size, std::uint64_t seed, const OmegaOptions& options) {
  check_inputs(a, b, x, y, mc_size);
  if (t_grid.empty()) throw ParamError("chaos_harness: t_grid is empty");
  if (options.replicates < 2) throw ParamError("chaos_harness: exp_stability_check needs at least two replicates");
  const CouplingPlan plan = plan_coupling(a, b);
  const double c0 = 0.5 * (x - y).squaredNorm();

  ExpStabilityReport rep;
  std::vector<double> ts, lhs;
  for (double t : t_grid) {
    if (t < 0.0) throw ParamError("chaos_harness: t_grid entries must be nonnegative");
    ExpStabilityRow row;
    row.t = t;
    if (t == 0.0) {
      row.lhs = c0;
    } else {
      std::vector<double> vals(options.replicates);
      parallel_for(options.replicates, [&](std::size_t r) {
        const auto [pa, pb] = sample_with_plan(a, b, plan, x, y, t, mc_size, seed, replicate_job(options.job, r));
        vals[r] = tensorized_cost(pa, pb);
      });
      const auto ms = mean_stderr(vals);
      row.lhs = ms.mean;
      row.se = ms.se;
    }
    row.rhs = std::exp(beta * t) * c0 + alpha * zeta(beta, t);
    row.pass = row.lhs <= row.rhs + 3.0 * row.se + 1e-12;
    rep.pass = rep.pass && row.pass;
    ts.push_back(t);
    lhs.push_back(row.lhs);
    rep.rows.push_back(row);
  }
  if (ts.size() >= 3) rep.lhs_vs_t = ols(ts, lhs);
  return rep;
}

}  // namespace mfchaos
