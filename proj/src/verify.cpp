#include "degen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace degen {
namespace {

bool any_nonzero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return true;
  return false;
}

// ||f1||-type boundary terms: the interpolation-space part and the
// |lambda|^{1-theta} graph part.  Falls back to the graph norm when the
// trace index leaves (0, 1).  `tfactor` carries the t^{1/(2p)} Jacobian of
// the stretching that maps a t-scaled boundary condition back to t = 1;
// without it the data side of the ratio would not shrink with t and the
// sweep could not be uniform.
void data_terms(const std::vector<double>& data, const OperatorSpec& op,
                const ComponentNorm& enorm, int order, double exponent,
                double p, double absl, double tfactor, double* interp_part,
                double* lambda_part) {
  *interp_part = 0.0;
  *lambda_part = 0.0;
  if (data.empty() || !any_nonzero(data)) return;
  double e_norm = enorm(std::span<const double>(data));
  double theta = sigma_trace(order, exponent, p);
  if (theta > 0.0 && theta < 1.0) {
    *interp_part = interp_norm(std::span<const double>(data), op, theta, p,
                               InterpMethod::Closed);
    *lambda_part = std::pow(absl, 1.0 - theta) * e_norm;
  } else {
    *interp_part = e_norm;
    *lambda_part = (1.0 + absl) * e_norm;
  }
  *interp_part *= tfactor;
  *lambda_part *= tfactor;
}

void finalize_ratio(CoercivityReport& r) {
  if (r.denominator > 0.0) {
    r.ratio = r.numerator / r.denominator;
    r.ratio_alt = r.numerator_alt / r.denominator;
  } else if (r.numerator == 0.0 && r.numerator_alt == 0.0) {
    r.ratio = r.ratio_alt = 0.0;
  } else {
    r.ratio = r.ratio_alt = std::numeric_limits<double>::infinity();
    r.note = "zero data with non-zero solution";
    r.warning = true;
  }
}

}  // namespace

CoercivityReport coercivity_report(const Problem1D& p, const Solution1D& s) {
  CoercivityReport r;
  r.lambda = p.lambda;
  r.t1 = p.kind == Form1D::Parametric ? p.t : 1.0;
  r.dims = 1;
  r.residual = s.residual;
  const double absl = std::abs(p.lambda);

  r.u_norm = weighted_lp_norm(s.u, p.grid, p.p, p.enorm);
  r.ux_norms = {r.u_norm, weighted_lp_norm(s.u1, p.grid, p.p, p.enorm),
                weighted_lp_norm(s.u2, p.grid, p.p, p.enorm)};
  r.au_norm = weighted_lp_norm(s.au, p.grid, p.p, p.enorm);
  r.f_norm = weighted_lp_norm(p.rhs, p.grid, p.p, p.enorm);

  for (int i = 0; i <= 2; ++i) {
    double lam_w = std::pow(absl, 1.0 - i / 2.0);
    r.numerator += lam_w * std::pow(r.t1, i / 2.0) * r.ux_norms[i];
    r.numerator_alt += lam_w * std::pow(r.t1, double(i)) * r.ux_norms[i];
  }
  r.numerator += r.au_norm;
  r.numerator_alt += r.au_norm;

  double tf = (p.kind == Form1D::Parametric && p.bc.t_scaled)
                  ? std::pow(r.t1, 1.0 / (2.0 * p.p))
                  : 1.0;
  data_terms(p.bc.data, p.op, p.enorm, p.bc.order, p.exponent, p.p, absl, tf,
             &r.f1x_interp, &r.f1x_lambda);
  r.denominator = r.f_norm + r.f1x_interp + r.f1x_lambda;
  finalize_ratio(r);
  return r;
}

CoercivityReport coercivity_report(const Problem2D& p, const Solution2D& s) {
  CoercivityReport r;
  r.lambda = p.lambda;
  r.t1 = p.t1;
  r.t2 = p.t2;
  r.dims = 2;
  r.residual = s.residual;
  r.lower_order_value = s.lower_order_value;
  if (s.coercivity_warning) {
    r.warning = true;
    r.note = s.warning;
  }
  const double absl = std::abs(p.lambda);

  r.u_norm = weighted_lp_norm(s.u, p.grids, p.p, p.enorm);
  r.ux_norms = {r.u_norm, weighted_lp_norm(s.ux1, p.grids, p.p, p.enorm),
                weighted_lp_norm(s.ux2, p.grids, p.p, p.enorm)};
  r.uy_norms = {r.u_norm, weighted_lp_norm(s.uy1, p.grids, p.p, p.enorm),
                weighted_lp_norm(s.uy2, p.grids, p.p, p.enorm)};
  r.au_norm = weighted_lp_norm(s.au, p.grids, p.p, p.enorm);
  r.f_norm = weighted_lp_norm(p.rhs, p.grids, p.p, p.enorm);

  // the 2D estimate is stated with t_k^i weights (primary); the t_k^{i/2}
  // variant is tracked alongside
  auto add_dir = [&](const std::array<double, 3>& norms, double t) {
    for (int i = 0; i <= 2; ++i) {
      double lam_w = std::pow(absl, 1.0 - i / 2.0);
      r.numerator += lam_w * std::pow(t, double(i)) * norms[i];
      r.numerator_alt += lam_w * std::pow(t, i / 2.0) * norms[i];
    }
  };
  // count the zero-order term once, not once per direction
  r.numerator = -absl * r.u_norm;
  r.numerator_alt = -absl * r.u_norm;
  add_dir(r.ux_norms, p.t1);
  add_dir(r.uy_norms, p.t2);
  r.numerator += r.au_norm;
  r.numerator_alt += r.au_norm;

  double tfx = p.bcx.t_scaled ? std::pow(p.t1, 1.0 / (2.0 * p.p)) : 1.0;
  double tfy = p.bcy.t_scaled ? std::pow(p.t2, 1.0 / (2.0 * p.p)) : 1.0;
  data_terms(p.bcx.data, p.op, p.enorm, p.bcx.order, p.alpha, p.p, absl, tfx,
             &r.f1x_interp, &r.f1x_lambda);
  data_terms(p.bcy.data, p.op, p.enorm, p.bcy.order, p.beta, p.p, absl, tfy,
             &r.f1y_interp, &r.f1y_lambda);
  r.denominator =
      r.f_norm + r.f1x_interp + r.f1x_lambda + r.f1y_interp + r.f1y_lambda;
  finalize_ratio(r);
  return r;
}

namespace {

template <class Fn>
std::vector<CoercivityReport> run_points(int count, int threads, Fn&& point) {
  std::vector<CoercivityReport> rows(static_cast<std::size_t>(count));
  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      try {
        rows[static_cast<std::size_t>(i)] = point(i);
      } catch (const Error& e) {
        CoercivityReport r;
        r.warning = true;
        r.note = e.what();
        r.ratio = r.ratio_alt = std::numeric_limits<double>::quiet_NaN();
        rows[static_cast<std::size_t>(i)] = std::move(r);
      }
    }
  };
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    work(0, count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int lo = t * chunk, hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

SweepSummary summarize(const std::vector<CoercivityReport>& rows) {
  SweepSummary s;
  std::vector<double> ratios;
  std::vector<std::pair<double, double>> trend;  // (log10|lambda|, ratio)
  for (const auto& r : rows) {
    if (std::isnan(r.ratio)) {
      ++s.failures;
      continue;
    }
    ratios.push_back(r.ratio);
    if (ratios.size() == 1 || r.ratio > s.max_ratio) {
      s.max_ratio = r.ratio;
      s.argmax_lambda = r.lambda;
      s.argmax_t1 = r.t1;
      s.argmax_t2 = r.t2;
    }
    double absl = std::abs(r.lambda);
    if (absl >= 1e3) trend.emplace_back(std::log10(absl), r.ratio);
  }
  if (ratios.empty()) return s;
  s.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  std::vector<double> sorted(ratios);
  std::sort(sorted.begin(), sorted.end());
  s.median_ratio = sorted[sorted.size() / 2];
  // least-squares slope of ratio against log10 |lambda| in the flat regime
  double n = double(trend.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : trend) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    if (den > 1e-12) s.trend_slope = (n * sxy - sx * sy) / den;
  }
  s.growth_flag = s.trend_slope > kTrendSlopeLimit ||
                  (s.median_ratio > 0.0 &&
                   s.max_ratio > kDispersionLimit * s.median_ratio);
  return s;
}

}  // namespace

SweepResult sweep_lambda(const Problem1D& base, const SectorSpec& sector,
                         int threads) {
  auto samples = sector.samples();
  auto rows = run_points(
      static_cast<int>(samples.size()), threads, [&](int i) {
        Problem1D p = base;
        p.lambda = samples[static_cast<std::size_t>(i)];
        return coercivity_report(p, solve_1d(p));
      });
  SweepResult out{std::move(rows), {}};
  out.summary = summarize(out.reports);
  return out;
}

SweepResult sweep_lambda(const Problem2D& base, const SectorSpec& sector,
                         int threads) {
  auto samples = sector.samples();
  auto rows = run_points(
      static_cast<int>(samples.size()), threads, [&](int i) {
        Problem2D p = base;
        p.lambda = samples[static_cast<std::size_t>(i)];
        return coercivity_report(p, solve_2d_direct(p));
      });
  SweepResult out{std::move(rows), {}};
  out.summary = summarize(out.reports);
  return out;
}

SweepResult sweep_t(const Problem1D& base, std::span<const double> t_values,
                    int threads) {
  if (base.kind != Form1D::Parametric)
    throw ValidationError("t sweeps need the parametric form");
  auto rows = run_points(
      static_cast<int>(t_values.size()), threads, [&](int i) {
        Problem1D p = base;
        p.t = t_values[static_cast<std::size_t>(i)];
        return coercivity_report(p, solve_1d(p));
      });
  SweepResult out{std::move(rows), {}};
  out.summary = summarize(out.reports);
  return out;
}

SweepResult sweep_t(const Problem2D& base,
                    std::span<const std::pair<double, double>> t_values,
                    int threads) {
  auto rows = run_points(
      static_cast<int>(t_values.size()), threads, [&](int i) {
        Problem2D p = base;
        p.t1 = t_values[static_cast<std::size_t>(i)].first;
        p.t2 = t_values[static_cast<std::size_t>(i)].second;
        return coercivity_report(p, solve_2d_direct(p));
      });
  SweepResult out{std::move(rows), {}};
  out.summary = summarize(out.reports);
  return out;
}

SemigroupTable semigroup_probe(const Problem1D& base, const SectorSpec& sector,
                               std::span<const int> mesh_levels,
                               unsigned seed) {
  auto samples = sector.samples();
  SemigroupTable table;
  for (int n : mesh_levels) {
    Problem1D p = base;
    p.grid = build_grid(base.grid.map, n, base.grid.depth());
    p.rhs.dim_e = p.op.dim();
    p.rhs.values.assign(static_cast<std::size_t>(n) * p.op.dim(), 0.0);
    p.bc.data.clear();
    const int de = p.op.dim();
    const int size = n * de;
    const int ni = (n - 2) * de;  // interior dof
    Eigen::VectorXd w(size), wi(ni);
    for (int k = 0; k < n; ++k)
      for (int e = 0; e < de; ++e) w[k * de + e] = p.grid.weights[k];
    for (int k = 1; k + 1 < n; ++k)
      for (int e = 0; e < de; ++e) wi[(k - 1) * de + e] = p.grid.weights[k];

    SemigroupLevel level;
    level.n = n;
    for (const auto& lambda : samples) {
      p.lambda = lambda;
      Assembled sys = assemble_1d(p);
      SparseComplexLU lu(sys.size, sys.triplets);
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      Eigen::VectorXcd g(ni);
      for (int i = 0; i < ni; ++i) g[i] = {unif(rng), unif(rng)};
      g /= std::sqrt(g.cwiseAbs2().dot(wi));
      double sigma2 = 0.0;
      for (int it = 0; it < 50; ++it) {
        Eigen::VectorXcd fg = Eigen::VectorXcd::Zero(size);
        for (int i = 0; i < ni; ++i) fg[de + i] = g[i];
        Eigen::VectorXcd u = lu.solve(fg);
        Eigen::VectorXcd z = lu.solve_adjoint(u.cwiseProduct(w.cast<std::complex<double>>()));
        Eigen::VectorXcd v(ni);
        for (int i = 0; i < ni; ++i) v[i] = z[de + i] / wi[i];
        double gg = g.cwiseAbs2().dot(wi);
        sigma2 = std::real(
            (v.conjugate().cwiseProduct(g).cwiseProduct(
                 wi.cast<std::complex<double>>()))
                .sum()) /
            gg;
        double nv = std::sqrt(v.cwiseAbs2().dot(wi));
        if (nv == 0.0) break;
        g = v / nv;
      }
      double value = (1.0 + std::abs(lambda)) * std::sqrt(std::max(sigma2, 0.0));
      level.values.emplace_back(lambda, value);
      level.max_value = std::max(level.max_value, value);
    }
    table.levels.push_back(std::move(level));
  }
  double lo = 1e300, hi = 0.0;
  for (const auto& lev : table.levels) {
    lo = std::min(lo, lev.max_value);
    hi = std::max(hi, lev.max_value);
  }
  table.level_spread = lo > 0.0 ? hi / lo : 0.0;
  return table;
}

}  // namespace degen
