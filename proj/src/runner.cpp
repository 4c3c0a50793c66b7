#include "degen/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "degen/reference.hpp"

namespace degen {
namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(int v) { return std::to_string(v); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::string& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open output file " + path.string());
    out_ << header << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

Json coercivity_json(const CoercivityReport& r) {
  Json j;
  j["lambda"] = Json::array({r.lambda.real(), r.lambda.imag()});
  j["t1"] = r.t1;
  j["t2"] = r.t2;
  j["u_norm"] = r.u_norm;
  j["au_norm"] = r.au_norm;
  j["f_norm"] = r.f_norm;
  j["ux_norms"] = r.ux_norms;
  if (r.dims == 2) j["uy_norms"] = r.uy_norms;
  j["f1x_interp"] = r.f1x_interp;
  j["f1x_lambda"] = r.f1x_lambda;
  if (r.dims == 2) {
    j["f1y_interp"] = r.f1y_interp;
    j["f1y_lambda"] = r.f1y_lambda;
  }
  j["numerator"] = r.numerator;
  j["numerator_alt"] = r.numerator_alt;
  j["denominator"] = r.denominator;
  j["ratio"] = r.ratio;
  j["ratio_alt"] = r.ratio_alt;
  j["residual"] = r.residual;
  j["lower_order_value"] = r.lower_order_value;
  j["warning"] = r.warning;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json summary_json(const SweepSummary& s) {
  Json j;
  j["max_ratio"] = s.max_ratio;
  j["min_ratio"] = s.min_ratio;
  j["median_ratio"] = s.median_ratio;
  j["argmax_lambda"] =
      Json::array({s.argmax_lambda.real(), s.argmax_lambda.imag()});
  j["argmax_t1"] = s.argmax_t1;
  j["argmax_t2"] = s.argmax_t2;
  j["trend_slope"] = s.trend_slope;
  j["growth_flag"] = s.growth_flag;
  j["failures"] = s.failures;
  return j;
}

constexpr const char* kSweepHeader =
    "lambda_re,lambda_im,t1,t2,u,au,f,ux0,ux1,ux2,uy0,uy1,uy2,"
    "f1x_interp,f1x_lambda,f1y_interp,f1y_lambda,numerator,numerator_alt,"
    "denominator,ratio,ratio_alt,residual,lower_order,warning,note";

void sweep_csv(const std::filesystem::path& path, const SweepResult& res) {
  Csv csv(path, kSweepHeader);
  for (const auto& r : res.reports) {
    csv.row({fmt(r.lambda.real()), fmt(r.lambda.imag()), fmt(r.t1), fmt(r.t2),
             fmt(r.u_norm), fmt(r.au_norm), fmt(r.f_norm), fmt(r.ux_norms[0]),
             fmt(r.ux_norms[1]), fmt(r.ux_norms[2]), fmt(r.uy_norms[0]),
             fmt(r.uy_norms[1]), fmt(r.uy_norms[2]), fmt(r.f1x_interp),
             fmt(r.f1x_lambda), fmt(r.f1y_interp), fmt(r.f1y_lambda),
             fmt(r.numerator), fmt(r.numerator_alt), fmt(r.denominator),
             fmt(r.ratio), fmt(r.ratio_alt), fmt(r.residual),
             fmt(r.lower_order_value), r.warning ? "1" : "0",
             csv_escape(r.note)});
  }
}

void solution_csv_1d(const std::filesystem::path& path, const Solution1D& s) {
  Csv csv(path,
          "x,comp,u_re,u_im,u1_re,u1_im,u2_re,u2_im,au_re,au_im");
  const int de = s.u.dim_e;
  for (int node = 0; node < s.grid.n; ++node)
    for (int e = 0; e < de; ++e) {
      auto u = s.u.at(node, e), u1 = s.u1.at(node, e), u2 = s.u2.at(node, e),
           au = s.au.at(node, e);
      csv.row({fmt(s.grid.x_nodes[node]), fmt(e + 1), fmt(u.real()),
               fmt(u.imag()), fmt(u1.real()), fmt(u1.imag()), fmt(u2.real()),
               fmt(u2.imag()), fmt(au.real()), fmt(au.imag())});
    }
}

void solution_csv_2d(const std::filesystem::path& path, const Solution2D& s) {
  Csv csv(path,
          "x,y,comp,u_re,u_im,ux1_re,ux1_im,ux2_re,ux2_im,uy1_re,uy1_im,"
          "uy2_re,uy2_im,au_re,au_im");
  const int de = s.u.dim_e, ny = s.grids.gy.n;
  for (int node = 0; node < s.grids.nodes(); ++node) {
    double x = s.grids.gx.x_nodes[node / ny];
    double y = s.grids.gy.x_nodes[node % ny];
    for (int e = 0; e < de; ++e) {
      auto u = s.u.at(node, e);
      auto x1 = s.ux1.at(node, e), x2 = s.ux2.at(node, e);
      auto y1 = s.uy1.at(node, e), y2 = s.uy2.at(node, e);
      auto au = s.au.at(node, e);
      csv.row({fmt(x), fmt(y), fmt(e + 1), fmt(u.real()), fmt(u.imag()),
               fmt(x1.real()), fmt(x1.imag()), fmt(x2.real()), fmt(x2.imag()),
               fmt(y1.real()), fmt(y1.imag()), fmt(y2.real()), fmt(y2.imag()),
               fmt(au.real()), fmt(au.imag())});
    }
  }
}

// ---- verify-all -----------------------------------------------------------

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

double rel_diff_2d(const Problem2D& p, const Solution2D& a,
                   const Solution2D& b) {
  ComplexField d;
  d.dim_e = a.u.dim_e;
  d.values.resize(a.u.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i)
    d.values[i] = a.u.values[i] - b.u.values[i];
  double den = weighted_lp_norm(b.u, p.grids, p.p, p.enorm);
  return den > 0.0 ? weighted_lp_norm(d, p.grids, p.p, p.enorm) / den : 0.0;
}

double rel_diff_1d(const Problem1D& p, const Solution1D& a,
                   const Solution1D& b) {
  ComplexField d;
  d.dim_e = a.u.dim_e;
  d.values.resize(a.u.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i)
    d.values[i] = a.u.values[i] - b.u.values[i];
  double den = weighted_lp_norm(b.u, p.grid, p.p, p.enorm);
  return den > 0.0 ? weighted_lp_norm(d, p.grid, p.p, p.enorm) / den : 0.0;
}

// goodness of fit of log(delta_n) against n
double log_fit_r2(const std::vector<IterationRecord>& recs) {
  std::vector<double> xs, ys;
  for (const auto& r : recs)
    if (r.delta_y > 0.0) {
      xs.push_back(double(r.iter));
      ys.push_back(std::log(r.delta_y));
    }
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (syy <= 0.0 || sxx <= 0.0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

std::vector<Assertion> verify_all(const std::filesystem::path& dir,
                                  unsigned seed, int threads) {
  std::vector<Assertion> out;
  auto record = [&](const std::string& name, bool pass, std::string detail) {
    out.push_back({name, pass, std::move(detail)});
  };

  {  // manufactured convergence, second order
    std::vector<double> errs;
    for (int n : {65, 129, 257, 513})
      errs.push_back(ref::manufactured_error(solve_1d(ref::manufactured_1d(n))));
    double worst = 1e300;
    std::string detail = "orders";
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      double order = std::log2(errs[i] / errs[i + 1]);
      worst = std::min(worst, order);
      detail += " " + fmt(order);
    }
    record("manufactured-convergence", worst >= 1.9, detail);
  }

  {  // plain vs regularized form
    Problem1D pr = ref::regularized_form(129);
    double d129 = rel_diff_1d(pr, solve_1d(ref::plain_form(129)), solve_1d(pr));
    Problem1D pr2 = ref::regularized_form(257);
    double d257 =
        rel_diff_1d(pr2, solve_1d(ref::plain_form(257)), solve_1d(pr2));
    bool pass = d129 <= 5e-3 && d257 > 0.0 && d129 / d257 >= 3.0;
    record("form-equivalence", pass,
           "diff129=" + fmt(d129) + " diff257=" + fmt(d257));
  }

  {  // direct vs reduced
    Problem2D p = ref::separable_2d(65);
    double d = rel_diff_2d(p, solve_2d_reduced(p), solve_2d_direct(p));
    record("two-path-agreement", d <= 1e-10, "diff=" + fmt(d));
  }

  {  // lambda-sector boundedness, 1D
    SweepResult res =
        sweep_lambda(ref::sweep_base_1d(257), ref::sweep_sector(), threads);
    sweep_csv(dir / "sweep_1d.csv", res);
    bool pass = res.summary.failures == 0 &&
                res.summary.trend_slope <= kTrendSlopeLimit &&
                res.summary.max_ratio >= ref::kSweep1dMaxRatioLo &&
                res.summary.max_ratio <= ref::kSweep1dMaxRatioHi;
    record("sector-boundedness-1d", pass,
           "max_ratio=" + fmt(res.summary.max_ratio) +
               " slope=" + fmt(res.summary.trend_slope));
  }

  {  // lambda-sector boundedness, 2D
    SweepResult res =
        sweep_lambda(ref::sweep_base_2d(33), ref::sweep_sector(), threads);
    sweep_csv(dir / "sweep_2d.csv", res);
    bool pass = res.summary.failures == 0 &&
                res.summary.trend_slope <= kTrendSlopeLimit &&
                res.summary.max_ratio >= ref::kSweep2dMaxRatioLo &&
                res.summary.max_ratio <= ref::kSweep2dMaxRatioHi;
    record("sector-boundedness-2d", pass,
           "max_ratio=" + fmt(res.summary.max_ratio) +
               " slope=" + fmt(res.summary.trend_slope));
  }

  {  // resolvent mesh stability
    SemigroupTable tab = semigroup_probe(ref::semigroup_base(65),
                                         ref::semigroup_sector(),
                                         std::vector<int>{65, 513}, seed);
    record("resolvent-mesh-stability",
           tab.level_spread <= ref::kSemigroupSpreadLimit,
           "spread=" + fmt(tab.level_spread));
  }

  {  // uniformity in the small parameter
    std::vector<double> ts = ref::tsweep_values();
    SweepResult res = sweep_t(ref::tsweep_base(257), ts, threads);
    sweep_csv(dir / "sweep_t.csv", res);
    double spread = res.summary.min_ratio > 0.0
                        ? res.summary.max_ratio / res.summary.min_ratio
                        : std::numeric_limits<double>::infinity();
    record("parameter-uniformity",
           res.summary.failures == 0 && spread <= ref::kTsweepSpreadLimit,
           "spread=" + fmt(spread));
  }

  {  // closed-form vs quadrature interpolation norms
    std::vector<double> data{0.7, 0.3};
    OperatorSpec a = OperatorSpec::diagonal({1.0, 4.0});
    double theta = sigma_trace(1, 1.3, 4.0);
    double c = interp_norm(std::span<const double>(data), a, theta, 2.0,
                           InterpMethod::Closed);
    double k = interp_norm(std::span<const double>(data), a, theta, 2.0,
                           InterpMethod::KFunctional);
    double r = k / c;
    bool pass = r <= ref::kInterpAgreementLimit &&
                r >= 1.0 / ref::kInterpAgreementLimit;
    record("interpolation-equivalence", pass, "k/closed=" + fmt(r));
  }

  {  // moving-domain identity
    Problem2D direct = ref::direct_scaled(1.0, 33);
    double d = rel_diff_2d(direct, solve_moving(ref::moving_problem(1.0, 33)),
                           solve_2d_direct(direct));
    record("moving-identity", d <= 1e-12, "diff=" + fmt(d));
  }

  {  // moving-domain pullback vs direct solve on the scaled domain
    Problem2D direct = ref::direct_scaled(2.0, 129);
    double d = rel_diff_2d(direct, solve_moving(ref::moving_problem(2.0, 129)),
                           solve_2d_direct(direct));
    record("moving-pullback", d <= 5e-3, "diff=" + fmt(d));
  }

  {  // contraction iteration converges geometrically
    PicardResult res = picard_solve(ref::nonlinear_toy(0.1, 17));
    double r2 = log_fit_r2(res.trace.records);
    bool pass = res.trace.converged &&
                res.trace.records.size() <= 30 &&
                res.trace.final_residual <= 1e-10 && r2 >= 0.999;
    record("contraction-convergence", pass,
           "iters=" + fmt(int(res.trace.records.size())) +
               " r2=" + fmt(r2) +
               " residual=" + fmt(res.trace.final_residual));
  }

  {  // strong nonlinearity must be rejected, not silently returned
    bool threw = false;
    std::string note = "no divergence";
    try {
      picard_solve(ref::nonlinear_toy(ref::kDivergentEps, 17));
    } catch (const DivergenceError& e) {
      threw = true;
      note = "diverged as expected";
      (void)e;
    }
    record("contraction-divergence", threw, note);
  }

  {  // probe of an exactly linear forcing law
    double mu = lipschitz_probe(ref::nonlinear_linear_force(17), 200, seed, 1.0);
    record("contraction-lipschitz", std::abs(mu - 2.0) <= 1e-10,
           "mu_hat=" + fmt(mu));
  }

  {  // coefficient decay condition
    std::vector<int> ns{8, 16, 32, 64};
    DecayReport rep = decay_condition_check(ref::decay_fixture(), ns);
    record("system-decay", rep.finite && rep.sup_a <= 3.0,
           "sup=" + fmt(rep.sup_a) + (rep.finite ? " stabilized" : " growing"));
    DecayReport bad = decay_condition_check(ref::decay_divergent(), ns);
    record("system-decay-negative", !bad.finite, "sup=" + fmt(bad.sup_a));
  }

  {  // truncation self-convergence
    std::vector<int> ns{8, 16, 32, 64};
    TruncationStudy study = truncation_study(ref::system_reference(64, 9), ns);
    Csv csv(dir / "truncation.csv", "n,diff,diff_weighted,residual");
    for (const auto& row : study.rows)
      csv.row({fmt(row.n), fmt(row.diff), fmt(row.diff_weighted),
               fmt(row.residual)});
    double first = study.rows.front().diff, last = study.rows.back().diff;
    bool pass = first > 0.0 && last / first <= 1e-3;
    record("system-truncation", pass,
           "first=" + fmt(first) + " last=" + fmt(last));
  }

  {  // zero coupling must reproduce independent scalar solves
    SystemSpec spec = ref::decoupled_pair();
    SystemSolution sys = truncate_and_solve(spec);
    double worst = 0.0;
    for (int m = 1; m <= 2; ++m) {
      Problem2D q = spec.base;
      q.op = OperatorSpec::scalar(double(m * m));
      q.enorm = ComponentNorm{spec.q, {}};
      q.mu = spec.mu;
      q.rhs = field_from_xy(q.grids, 1, [&](double x, double y, int) {
        return spec.rhs_law.evaluate({{"x", x}, {"y", y}, {"m", double(m)}});
      });
      Solution2D scalar = solve_2d_direct(q);
      double num = 0.0, den = 0.0;
      for (int node = 0; node < q.grids.nodes(); ++node) {
        num += std::abs(sys.solution.u.at(node, m - 1) -
                        scalar.u.at(node, 0));
        den += std::abs(scalar.u.at(node, 0));
      }
      worst = std::max(worst, den > 0.0 ? num / den : 0.0);
    }
    record("system-decoupling", worst <= 1e-12, "diff=" + fmt(worst));
  }

  {  // coupled reference instance stays in its measured ratio bracket
    SystemSolution sys = truncate_and_solve(ref::system_reference(16, 9));
    bool pass = std::isfinite(sys.report.ratio) &&
                sys.report.ratio >= ref::kSystemRatioLo &&
                sys.report.ratio <= ref::kSystemRatioHi;
    record("system-coercivity", pass, "ratio=" + fmt(sys.report.ratio));
  }

  return out;
}

// ---- dispatch --------------------------------------------------------------

int run_into(const RunConfig& cfg, int threads,
             const std::filesystem::path& dir, Json& results) {
  const std::string& sub = cfg.subcommand;
  if (sub == "solve1d") {
    Solution1D s = solve_1d(*cfg.p1);
    solution_csv_1d(dir / "solution.csv", s);
    results["residual"] = s.residual;
    results["coercivity"] = coercivity_json(coercivity_report(*cfg.p1, s));
    results["files"] = Json::array({"solution.csv"});
    return 0;
  }
  if (sub == "solve2d") {
    Solution2D s = cfg.route == "reduced" ? solve_2d_reduced(*cfg.p2)
                                          : solve_2d_direct(*cfg.p2);
    solution_csv_2d(dir / "solution.csv", s);
    results["route"] = cfg.route;
    results["residual"] = s.residual;
    if (s.coercivity_warning) results["warning"] = s.warning;
    results["coercivity"] = coercivity_json(coercivity_report(*cfg.p2, s));
    results["files"] = Json::array({"solution.csv"});
    return 0;
  }
  if (sub == "moving") {
    Solution2D s = solve_moving(*cfg.p2);
    solution_csv_2d(dir / "solution.csv", s);
    results["residual"] = s.residual;
    results["endpoints"] = Json::array(
        {cfg.p2->grids.gx.map.basepoint(), cfg.p2->grids.gy.map.basepoint()});
    results["files"] = Json::array({"solution.csv"});
    return 0;
  }
  if (sub == "sweep-lambda" || sub == "sweep-t") {
    SweepResult res;
    if (sub == "sweep-lambda")
      res = cfg.p1 ? sweep_lambda(*cfg.p1, *cfg.sector, threads)
                   : sweep_lambda(*cfg.p2, *cfg.sector, threads);
    else
      res = cfg.p1 ? sweep_t(*cfg.p1, cfg.t_values_1d, threads)
                   : sweep_t(*cfg.p2, cfg.t_values_2d, threads);
    sweep_csv(dir / "sweep.csv", res);
    results["summary"] = summary_json(res.summary);
    results["points"] = int(res.reports.size());
    results["files"] = Json::array({"sweep.csv"});
    return res.summary.failures > 0 ? 5 : 0;
  }
  if (sub == "nonlinear") {
    const NonlinearConfig& nc = *cfg.nonlinear;
    PicardResult res = picard_solve(nc.spec);
    // divergence throws; reaching here means the iteration settled
    Csv csv(dir / "iterations.csv", "iter,delta_y,ratio,in_ball,state_max");
    for (const auto& r : res.trace.records)
      csv.row({fmt(r.iter), fmt(r.delta_y), fmt(r.ratio),
               r.in_ball ? "1" : "0", fmt(r.state_max)});
    double mu = lipschitz_probe(nc.spec, nc.probe_samples, cfg.seed,
                                nc.probe_radius);
    BallReport ball =
        ball_check(res.trace, nc.spec.ball_radius, mu);
    results["converged"] = res.trace.converged;
    results["iterations"] = int(res.trace.records.size());
    results["final_residual"] = res.trace.final_residual;
    results["c0_observed"] = res.trace.c0_observed;
    results["f0_norm"] = res.trace.f0_norm;
    results["w_y_norm"] = res.trace.w_y_norm;
    results["shrink_count"] = res.trace.shrink_count;
    results["lipschitz"] = mu;
    Json bj;
    bj["stayed_in_ball"] = ball.stayed_in_ball;
    bj["c0"] = ball.c0;
    bj["mu_hat"] = ball.mu_hat;
    bj["contraction_bound"] = ball.contraction_bound;
    bj["contraction_ok"] = ball.contraction_ok;
    bj["implied_radius"] = ball.implied_radius;
    bj["suggested_radius"] = std::isfinite(ball.suggested_radius)
                                 ? Json(ball.suggested_radius)
                                 : Json();
    results["ball"] = bj;
    results["files"] = Json::array({"iterations.csv"});
    if (!res.trace.converged) return 3;
    return 0;
  }
  if (sub == "system") {
    const SystemConfig& sc = *cfg.system;
    SystemSolution sys = truncate_and_solve(sc.spec);
    Json dj;
    dj["sup_a"] = sys.decay.sup_a;
    dj["sup_b"] = sys.decay.sup_b;
    dj["finite"] = sys.decay.finite;
    {
      Csv csv(dir / "decay.csv", "n,sup_a,sup_b");
      for (const auto& row : sys.decay.growth_vs_n)
        csv.row({fmt(row.n), fmt(row.sup_a), fmt(row.sup_b)});
    }
    results["decay"] = dj;
    results["residual"] = sys.solution.residual;
    results["coercivity"] = coercivity_json(sys.report);
    Json files = Json::array({"decay.csv"});
    if (!sc.n_list.empty()) {
      TruncationStudy study = truncation_study(sc.spec, sc.n_list);
      Csv csv(dir / "truncation.csv", "n,diff,diff_weighted,residual");
      Json rows = Json::array();
      for (const auto& row : study.rows) {
        csv.row({fmt(row.n), fmt(row.diff), fmt(row.diff_weighted),
                 fmt(row.residual)});
        rows.push_back(Json{{"n", row.n},
                            {"diff", row.diff},
                            {"diff_weighted", row.diff_weighted},
                            {"residual", row.residual}});
      }
      results["truncation"] =
          Json{{"n_ref", study.n_ref},
               {"decay_finite", study.decay_finite},
               {"rows", rows}};
      files.push_back("truncation.csv");
    }
    results["files"] = files;
    return 0;
  }
  // verify-all
  std::vector<Assertion> checks = verify_all(dir, cfg.seed, threads);
  Json rows = Json::array();
  bool all = true;
  for (const auto& a : checks) {
    rows.push_back(Json{{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    all = all && a.pass;
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << "  (" << a.detail
              << ")\n";
  }
  results["assertions"] = rows;
  results["files"] =
      Json::array({"sweep_1d.csv", "sweep_2d.csv", "sweep_t.csv",
                   "truncation.csv"});
  return all ? 0 : 4;
}

}  // namespace

RunOutcome execute(const RunConfig& cfg, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.report["version"] = "degensolve 1.0.0";
  out.report["config"] = cfg.echo;
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);

  Json results = Json::object();
  try {
    out.exit_code = run_into(cfg, threads, dir, results);
    out.report["results"] = results;
  } catch (const ValidationError& e) {
    out.exit_code = 2;
    out.report["results"] = results;
    out.report["error"] = Json{{"type", "validation"}, {"message", e.what()}};
  } catch (const DslError& e) {
    out.exit_code = 2;
    out.report["results"] = results;
    out.report["error"] = Json{{"type", "validation"}, {"message", e.what()}};
  } catch (const DivergenceError& e) {
    out.exit_code = 3;
    Json rows = Json::array();
    for (const auto& r : e.trace().records)
      rows.push_back(Json{{"iter", r.iter},
                          {"delta_y", r.delta_y},
                          {"ratio", r.ratio},
                          {"in_ball", r.in_ball}});
    out.report["results"] = results;
    out.report["error"] = Json{{"type", "divergence"},
                               {"message", e.what()},
                               {"iterations", rows}};
  } catch (const SolveError& e) {
    out.exit_code = 3;
    out.report["results"] = results;
    out.report["error"] = Json{{"type", "solver"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.exit_code = 3;
    out.report["results"] = results;
    out.report["error"] = Json{{"type", "internal"}, {"message", e.what()}};
  }

  {
    std::ofstream rep(dir / "report.json", std::ios::binary);
    rep << out.report.dump(2) << '\n';
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cout << cfg.subcommand << ": exit " << out.exit_code << " after " << ms
            << " ms, artifacts in " << dir.string() << "\n";
  return out;
}

}  // namespace degen
