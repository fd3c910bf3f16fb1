#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mfchaos/chaos.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/parallel.hpp"
#include "mfchaos/rng.hpp"

namespace mfchaos {

const char* to_string(XiKind k) {
  switch (k) {
    case XiKind::W2Squared: return "w2_squared";
    case XiKind::FirstMomentSq: return "first_moment_sq";
    case XiKind::SigmaSq: return "sigma_sq";
  }
  return "unknown";
}

AlephEstimate estimate_aleph(const PointCloud& rho, const Xi& xi, std::size_t n, std::size_t trials,
                             std::uint64_t seed, std::uint64_t job, const TransportOptions& options) {
  if (n < 2) throw ParamError("chaos_harness: estimate_aleph needs N >= 2");
  if (trials < 2) throw ParamError("chaos_harness: estimate_aleph needs at least two trials");
  if (rho.empty()) throw EmptyMeasureError("chaos_harness: reference cloud is empty");
  if (xi.kind == XiKind::SigmaSq && (xi.model == nullptr || !xi.model->is_average_form())) {
    throw ModelKindError("chaos_harness: SigmaSq needs an average-form model");
  }
  const std::size_t d = rho.dim();
  const Vec rho_mean = rho.mean();

  std::vector<double> values(trials, 0.0);
  std::vector<char> exact(trials, 1);
  std::vector<CostMethod> methods(trials, CostMethod::Quantile1D);
  parallel_for(trials, [&](std::size_t t) {
    Stream s(seed, job, t, 0);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = static_cast<std::size_t>(s.below(rho.size()));
    std::vector<double> coords;
    coords.reserve((n - 1) * d);
    for (std::size_t k = 1; k < n; ++k) {
      const auto p = rho.point(idx[k]);
      coords.insert(coords.end(), p.data(), p.data() + p.size());
    }
    const PointCloud rest(d, std::move(coords));
    switch (xi.kind) {
      case XiKind::W2Squared: {
        const auto c = transport_cost(rest, rho, options);
        values[t] = c.cost;
        exact[t] = c.exact ? 1 : 0;
        methods[t] = c.method;
        break;
      }
      case XiKind::FirstMomentSq:
        values[t] = (rest.mean() - rho_mean).squaredNorm();
        break;
      case XiKind::SigmaSq: {
        const double sg = sigma_functional(*xi.model, rho.point(idx[0]), rest, rho);
        values[t] = sg * sg;
        break;
      }
    }
  });

  const auto ms = mean_stderr(values);
  AlephEstimate out{ms.mean, ms.se, true, to_string(xi.kind)};
  if (xi.kind == XiKind::W2Squared) {
    out.method = to_string(methods.front());
    for (std::size_t t = 0; t < trials; ++t) {
      if (!exact[t]) {
        out.exact = false;
        out.method = to_string(CostMethod::Sinkhorn);
      }
    }
  }
  return out;
}

double fournier_guillin_rate(std::size_t d, double q, double n, double mq, double l) {
  if (d == 0) throw ParamError("chaos_harness: dimension must be positive");
  if (!(q > 2.0)) throw ParamError("chaos_harness: Fournier-Guillin rate needs q > 2");
  if (!(n >= 1.0)) throw ParamError("chaos_harness: Fournier-Guillin rate needs N >= 1");
  if (mq < 0.0 || l < 0.0) throw ParamError("chaos_harness: Mq and L must be nonnegative");
  const double tail = std::pow(n, -(q - 2.0) / q);
  double main = 0.0;
  if (d < 4) {
    if (q == 4.0) throw ParamError("chaos_harness: excluded case d < 4 with q = 4");
    main = std::pow(n, -0.5);
  } else if (d == 4) {
    if (q == 4.0) throw ParamError("chaos_harness: excluded case d = 4 with q = 4");
    main = std::pow(n, -0.5) * std::log(1.0 + n);
  } else {
    const double excluded = static_cast<double>(d) / (static_cast<double>(d) - 2.0);
    if (std::abs(q - excluded) <= 1e-12 * excluded) {
      throw ParamError("chaos_harness: excluded case d > 4 with q = d/(d-2)");
    }
    main = std::pow(n, -2.0 / static_cast<double>(d));
  }
  return l * std::pow(mq, 2.0 / q) * (main + tail);
}

RhoFamily rho_family_from_string(const std::string& name) {
  if (name == "uniform") return RhoFamily::Uniform;
  if (name == "normal") return RhoFamily::Normal;
  if (name == "point") return RhoFamily::Point;
  throw ParamError("chaos_harness: unknown distribution family '" + name + "'");
}

const char* to_string(RhoFamily f) {
  switch (f) {
    case RhoFamily::Uniform: return "uniform";
    case RhoFamily::Normal: return "normal";
    case RhoFamily::Point: return "point";
  }
  return "unknown";
}

namespace {

double draw(RhoFamily f, const FgConfig& c, Stream& s) {
  switch (f) {
    case RhoFamily::Uniform: return c.p0 + (c.p1 - c.p0) * s.uniform();
    case RhoFamily::Normal: return c.p0 + c.p1 * s.normal();
    case RhoFamily::Point: return c.p0;
  }
  return 0.0;
}

// Exact C2 between a cloud and N(m, sd^2) on the line, segment by segment of
// the quantile function.
double w2_1d_vs_normal(const PointCloud& mu, double m, double sd) {
  std::vector<double> xs(mu.coords().begin(), mu.coords().end());
  std::sort(xs.begin(), xs.end());
  const boost::math::normal_distribution<> std_normal;
  const double k = static_cast<double>(xs.size());
  auto pdf = [](double z) { return std::isfinite(z) ? std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) : 0.0; };
  auto z_at = [&](double u) {
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return boost::math::quantile(std_normal, u);
  };
  // primitives over u of z(u) and z(u)^2 expressed in z
  auto first = [&](double z) { return -pdf(z); };
  auto second = [&](double z, double u) { return std::isfinite(z) ? u - z * pdf(z) : u; };
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ua = static_cast<double>(i) / k, ub = static_cast<double>(i + 1) / k;
    const double za = z_at(ua), zb = z_at(ub);
    const double iz = first(zb) - first(za);
    const double iz2 = second(zb, ub) - second(za, ua);
    const double e = (xs[i] - m) / sd;
    total += sd * sd * (e * e * (ub - ua) - 2.0 * e * iz + iz2);
  }
  return 0.5 * total;
}

}  // namespace

FgReport fg_bound_check(RhoFamily family, std::size_t d, double q, const std::vector<std::size_t>& n_list,
                        std::size_t trials, const FgConfig& config) {
  if (n_list.size() < 2) throw ParamError("chaos_harness: fg_bound_check needs at least two N values");
  if (!std::is_sorted(n_list.begin(), n_list.end()) || n_list.front() < 2) {
    throw ParamError("chaos_harness: N values must be increasing and at least 2");
  }
  if (trials < 2) throw ParamError("chaos_harness: fg_bound_check needs at least two trials");
  if (family == RhoFamily::Uniform && !(config.p1 > config.p0)) throw ParamError("chaos_harness: uniform needs lo < hi");
  if (family == RhoFamily::Normal && !(config.p1 > 0.0)) throw ParamError("chaos_harness: normal needs sd > 0");
  (void)fournier_guillin_rate(d, q, 1.0, 1.0, 1.0);  // validates (d, q)

  FgReport report;
  report.family = family;
  report.d = d;
  report.q = q;

  // q-th moment E|X|^q from a fixed large sample; any constant factor is absorbed by L
  {
    constexpr std::size_t kMoment = 200000;
    double acc = 0.0;
    for (std::size_t i = 0; i < kMoment; ++i) {
      Stream s(config.seed, 0x6d6f6d656e74ull, i, 0);
      double r2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double v = draw(family, config, s);
        r2 += v * v;
      }
      acc += std::pow(r2, q / 2.0);
    }
    report.mq = acc / static_cast<double>(kMoment);
  }

  const bool exact_1d = d == 1;
  PointCloud reference;
  if (!exact_1d) {
    std::vector<double> coords(config.reference_size * d);
    for (std::size_t i = 0; i < config.reference_size; ++i) {
      Stream s(config.seed, 0x726566ull, i, 0);
      for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = draw(family, config, s);
    }
    reference = PointCloud(d, std::move(coords));
    report.warnings.push_back("d > 1: the law is represented by a reference cloud of " +
                              std::to_string(config.reference_size) + " points");
  }

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::size_t n = n_list[ni];
    FgRow row;
    row.n = n;
    if (exact_1d) {
      std::vector<double> values(trials);
      parallel_for(trials, [&](std::size_t t) {
        Stream s(config.seed, 0x666700ull + ni, t, 0);
        (void)draw(family, config, s);  // y_1 does not enter Xi for W2Squared
        std::vector<double> pts(n - 1);
        for (auto& p : pts) p = draw(family, config, s);
        const PointCloud rest(1, std::move(pts));
        switch (family) {
          case RhoFamily::Uniform: values[t] = w2_1d_vs_uniform(rest, config.p0, config.p1); break;
          case RhoFamily::Normal: values[t] = w2_1d_vs_normal(rest, config.p0, config.p1); break;
          case RhoFamily::Point: values[t] = 0.0; break;
        }
      });
      const auto ms = mean_stderr(values);
      row.aleph = ms.mean;
      row.aleph_se = ms.se;
    } else {
      const auto est = estimate_aleph(reference, {XiKind::W2Squared, nullptr}, n, trials, config.seed, 0x666700ull + ni);
      row.aleph = est.mean;
      row.aleph_se = est.se;
      if (!est.exact) report.warnings.push_back("N = " + std::to_string(n) + ": Sinkhorn fallback used");
    }
    row.rate = fournier_guillin_rate(d, q, static_cast<double>(n - 1), report.mq, 1.0);
    report.rows.push_back(row);
  }

  report.l_calibrated = report.rows.front().rate > 0.0 ? report.rows.front().aleph / report.rows.front().rate : 0.0;
  for (auto& row : report.rows) {
    row.bound = report.l_calibrated * row.rate;
    row.margin = row.bound - row.aleph;
    row.pass = row.aleph <= row.bound * (1.0 + 1e-12);
    report.bound_holds = report.bound_holds && row.pass;
  }
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    const auto& a = report.rows[i];
    const auto& b = report.rows[i + 1];
    if (b.n != 2 * a.n || !(a.bound > 0.0) || !(a.aleph > 0.0)) continue;
    const double ratio = (b.aleph / b.bound) / (a.aleph / a.bound);
    if (ratio > 1.1) report.ratio_ok = false;
  }
  return report;
}

}  // namespace mfchaos
