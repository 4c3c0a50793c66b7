#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "degen/config.hpp"
#include "degen/nonlinear.hpp"
#include "degen/reference.hpp"
#include "degen/runner.hpp"
#include "degen/sysinf.hpp"
#include "degen/verify.hpp"

using namespace degen;
using C = std::complex<double>;

TEST_SUITE("dsl") {
  TEST_CASE("arithmetic") {
    CHECK(dsl::parse("x^2 + 1").evaluate({{"x", 2.0}}) == doctest::Approx(5.0));
    CHECK(dsl::parse("2^-abs(m-j)").evaluate({{"m", 3.0}, {"j", 1.0}}) ==
          doctest::Approx(0.25));
    CHECK(dsl::parse("min(x, y) * max(x, y)")
              .evaluate({{"x", -2.0}, {"y", 3.0}}) == doctest::Approx(-6.0));
    CHECK(dsl::parse("pow(x, 3)").evaluate({{"x", 2.0}}) ==
          doctest::Approx(8.0));
  }

  TEST_CASE("parse error carries the offset") {
    try {
      dsl::parse("x +");
      FAIL("expected a parse failure");
    } catch (const DslError& e) {
      CHECK(e.offset() == 3);
    }
  }

  TEST_CASE("unknown variables are rejected") {
    CHECK_THROWS_AS(dsl::parse("q + 1"), DslError);
    // the state names are only legal with the extended variable set
    CHECK_THROWS_AS(dsl::parse("u * x"), DslError);
    CHECK_NOTHROW(dsl::parse("u * x", dsl::kStateVariables));
  }

  TEST_CASE("free variables") {
    auto e = dsl::parse("exp(-x) * sin(y) + m");
    CHECK(e.variables() == std::set<std::string>{"x", "y", "m"});
    CHECK(e.depends_on("x"));
    CHECK(!e.depends_on("j"));
  }

  TEST_CASE("unparse round trip evaluates identically") {
    const char* sources[] = {
        "x^2 + 1",         "2^-abs(m-j)",       "exp(-x-y)*x*y",
        "min(x, max(y,1))", "0.1*2^-abs(m-j)",  "sin(x)*cos(y)+x/(y+2)",
    };
    dsl::Bindings env{{"x", 0.7}, {"y", 1.9}, {"m", 4.0}, {"j", 2.0}};
    for (const char* s : sources) {
      auto e = dsl::parse(s);
      auto r = dsl::parse(e.unparse());
      CHECK(e.evaluate(env) == doctest::Approx(r.evaluate(env)).epsilon(1e-14));
    }
  }
}

TEST_SUITE("mesh") {
  TEST_CASE("transform round trip") {
    TransformMap map(1.3, 2.0);
    for (double x : {0.05, 0.3, 1.0, 1.99}) {
      CHECK(map.inverse(map.forward(x)) == doctest::Approx(x).epsilon(1e-13));
      CHECK(map.forward(x) <= 0.0);
    }
    CHECK(map.forward(2.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(TransformMap(0.9, 1.0), ValidationError);
    CHECK_THROWS_AS(TransformMap(1.3, -1.0), ValidationError);
  }

  TEST_CASE("weights reproduce the interval measure exactly") {
    Grid1D g = build_grid(TransformMap(1.3, 1.0), 101, 8.0);
    double sum = 0.0;
    for (double w : g.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(g.x_nodes.back() - g.x_nodes.front())
                     .epsilon(1e-12));
  }

  TEST_CASE("depth rule") {
    CHECK(default_depth(1.0) == doctest::Approx(std::log(1e10)));
    CHECK(default_depth(4.0) == doctest::Approx(0.5 * std::log(1e10)));
    CHECK_THROWS_AS(default_depth(0.0), ValidationError);
    CHECK_THROWS_AS(default_depth(-2.0), ValidationError);
  }

  TEST_CASE("graded derivative matches the chain rule") {
    // with alpha equal to the grid grading, u^{[1]} is d/ds, so e^s is a
    // fixed point of the derivative
    Grid1D g = build_grid(TransformMap(1.3, 1.0), 513, 5.0);
    DiscreteField u = field_from_x(g, 1, [&](double x, int) {
      return std::exp(g.map.forward(x));
    });
    DiscreteField d1 = reg_derivative(u, g, 1.3, 1);
    double worst = 0.0;
    for (int k = 1; k + 1 < g.n; ++k)
      worst = std::max(worst, std::abs(d1.values[k] - u.values[k]));
    CHECK(worst < 1e-3);
  }

  TEST_CASE("drift identity for a mismatched grading") {
    // -x^{2 alpha} u'' = -u^{[2]} + alpha x^{alpha-1} u^{[1]}; for u = x^3
    // both sides equal -6 x^{2 alpha + 1}
    const double alpha = 1.4;
    Grid1D g = build_grid(TransformMap(1.3, 1.0), 513, 3.0);
    DiscreteField u =
        field_from_x(g, 1, [](double x, int) { return x * x * x; });
    DiscreteField d1 = reg_derivative(u, g, alpha, 1);
    DiscreteField d2 = reg_derivative(u, g, alpha, 2);
    double worst = 0.0;
    for (int k = 1; k + 1 < g.n; ++k) {
      double x = g.x_nodes[k];
      double lhs = -d2.values[k] + alpha * std::pow(x, alpha - 1.0) * d1.values[k];
      double ref = -6.0 * std::pow(x, 2.0 * alpha + 1.0);
      worst = std::max(worst, std::abs(lhs - ref));
    }
    CHECK(worst < 1e-2);
  }

  TEST_CASE("component norm validation") {
    ComponentNorm n{2.0, {1.0, -1.0}};
    CHECK_THROWS_AS(n.validate(2), ValidationError);
    ComponentNorm bad_q{1.0, {}};
    CHECK_THROWS_AS(bad_q.validate(1), ValidationError);
    ComponentNorm ok{4.0, {1.0, 2.0}};
    CHECK_NOTHROW(ok.validate(2));
    CHECK_THROWS_AS(ok.validate(3), ValidationError);
  }
}

TEST_SUITE("opspace") {
  TEST_CASE("trace exponent") {
    // grading 1.3, p = 4, first derivative: 1/2 + 1/(2 (1-1.3) 4) = 1/12
    CHECK(sigma_trace(1, 1.3, 4.0) == doctest::Approx(1.0 / 12.0));
    CHECK(theta_from_exponent(1.3, 4.0) ==
          doctest::Approx(0.5 * (1.0 - 1.0 / (0.3 * 4.0))));
  }

  TEST_CASE("interpolation norm, single-component closed form") {
    // at theta = 1/4, q = 2 the quadrature/closed ratio is sqrt(8/3) for
    // every single-component diagonal
    for (double d : {1.0, 3.0, 40.0}) {
      std::vector<double> u{0.7};
      OperatorSpec a = OperatorSpec::diagonal({d});
      double closed = interp_norm(std::span<const double>(u), a, 0.25, 2.0,
                                  InterpMethod::Closed);
      double k = interp_norm(std::span<const double>(u), a, 0.25, 2.0,
                             InterpMethod::KFunctional);
      CHECK(closed == doctest::Approx(std::pow(d, 0.75) * 0.7));
      CHECK(k / closed == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-2));
    }
  }

  TEST_CASE("interpolation norm, methods agree at the analytic constant") {
    std::vector<double> u{0.7, 0.3, 1.1};
    OperatorSpec a = OperatorSpec::diagonal({1.0, 4.0, 9.0});
    for (double theta : {0.1, 0.25, 0.5, 0.75}) {
      for (double q : {2.0, 4.0}) {
        double c = std::pow(1.0 / ((1.0 - theta) * q) + 1.0 / (theta * q),
                            1.0 / q);
        double closed = interp_norm(std::span<const double>(u), a, theta, q,
                                    InterpMethod::Closed);
        double k = interp_norm(std::span<const double>(u), a, theta, q,
                               InterpMethod::KFunctional);
        CHECK(k / closed == doctest::Approx(c).epsilon(2e-2));
      }
    }
    CHECK_THROWS_AS(interp_norm(std::span<const double>(u), a, 1.5, 2.0,
                                InterpMethod::Closed),
                    ValidationError);
  }

  TEST_CASE("resolvent norm oracles") {
    // scalar: exactly 1/|a + lambda|
    CHECK(resolvent_qnorm(OperatorSpec::scalar(2.0), C(0.0, 10.0), 2.0) ==
          doctest::Approx(1.0 / std::abs(C(2.0, 10.0))));
    // diagonal: the largest mode wins
    CHECK(resolvent_qnorm(OperatorSpec::diagonal({2.0, 5.0}), C(1.0, 0.0),
                          2.0) == doctest::Approx(1.0 / 3.0));
    // dense symmetric, q = 2: eigenvalues {1, 3} at lambda = 0
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;
    CHECK(resolvent_qnorm(OperatorSpec::dense(m), C(0.0, 0.0), 2.0) ==
          doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("spectral helpers on a non-symmetric block") {
    Eigen::MatrixXd m(2, 2);
    m << 2.0, 1.0, 0.5, 2.0;  // eigenvalues 2 +- 1/sqrt(2)
    OperatorSpec a = OperatorSpec::dense(m);
    CHECK(a.min_real_eig() == doctest::Approx(2.0 - std::sqrt(0.5)));
    CHECK(a.spectrum_positive());
    Eigen::MatrixXd neg(2, 2);
    neg << -1.0, 0.0, 0.0, 2.0;
    CHECK(!OperatorSpec::dense(neg).spectrum_positive());
  }

  TEST_CASE("sector samples are modulus-major") {
    SectorSpec s{M_PI / 3.0, {1.0, 10.0}, {0.0, M_PI / 6.0}};
    auto pts = s.samples();
    REQUIRE(pts.size() == 4);
    CHECK(std::abs(pts[0]) == doctest::Approx(1.0));
    CHECK(std::abs(pts[1]) == doctest::Approx(1.0));
    CHECK(std::abs(pts[2]) == doctest::Approx(10.0));
    CHECK(std::arg(pts[3]) == doctest::Approx(M_PI / 6.0));
    SectorSpec bad{M_PI / 3.0, {1.0}, {M_PI / 2.0}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
  }
}

TEST_SUITE("linsolve") {
  TEST_CASE("real matrix, complex right-hand side") {
    std::vector<CTriplet> ts{{0, 0, C(3, 0)}, {0, 1, C(1, 0)},
                             {1, 0, C(1, 0)}, {1, 1, C(2, 0)}};
    SparseComplexLU lu(2, ts);
    CHECK(lu.real_path());
    Eigen::VectorXcd b(2);
    b << C(1, 2), C(0, -1);
    Eigen::VectorXcd x = lu.solve(b);
    CHECK(std::abs(x[0] - C(0.4, 1.0)) < 1e-14);
    CHECK(std::abs(x[1] - C(-0.2, -1.0)) < 1e-14);
    // adjoint of a real symmetric matrix = the matrix itself
    Eigen::VectorXcd xa = lu.solve_adjoint(b);
    CHECK(std::abs(xa[0] - x[0]) < 1e-14);
  }

  TEST_CASE("complex matrix via the doubled real form") {
    std::vector<CTriplet> ts{{0, 0, C(2, 1)}, {1, 1, C(1, -3)}};
    SparseComplexLU lu(2, ts);
    CHECK(!lu.real_path());
    Eigen::VectorXcd b(2);
    b << C(1, 0), C(0, 1);
    Eigen::VectorXcd x = lu.solve(b);
    CHECK(std::abs(x[0] - C(1, 0) / C(2, 1)) < 1e-14);
    CHECK(std::abs(x[1] - C(0, 1) / C(1, -3)) < 1e-14);
    // M^H z = b  =>  z = b / conj(diag)
    Eigen::VectorXcd z = lu.solve_adjoint(b);
    CHECK(std::abs(z[0] - C(1, 0) / C(2, -1)) < 1e-14);
    CHECK(std::abs(z[1] - C(0, 1) / C(1, 3)) < 1e-14);
  }

  TEST_CASE("singular system is reported") {
    std::vector<CTriplet> ts{{0, 0, C(1, 0)}, {1, 0, C(1, 0)}};
    CHECK_THROWS_AS(SparseComplexLU(2, ts), SolveError);
  }
}

namespace {

double rel_diff(const ComplexField& a, const ComplexField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::abs(a.values[i] - b.values[i]);
    den += std::abs(b.values[i]);
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace

TEST_SUITE("solve1d") {
  TEST_CASE("zero data gives the zero solution") {
    Problem1D p = ref::manufactured_1d(65);
    for (auto& v : p.rhs.values) v = 0.0;
    p.bc.data.clear();
    Solution1D s = solve_1d(p);
    for (auto& v : s.u.values) CHECK(std::abs(v) == 0.0);
  }

  TEST_CASE("manufactured solution at moderate resolution") {
    Solution1D s = solve_1d(ref::manufactured_1d(257));
    CHECK(ref::manufactured_error(s) < 1e-4);
    CHECK(s.residual <= 1e-10);
  }

  TEST_CASE("truncation depth is immaterial once the tail is resolved") {
    // same spacing, one grid 25% deeper: the overlapping nodes agree far
    // below the discretization error
    Problem1D a = ref::manufactured_1d(257);
    a.grid = build_grid(a.grid.map, 257, 24.0);
    a.rhs = field_from_x(a.grid, 1, [&](double x, int) {
      return std::exp(a.grid.map.forward(x));
    });
    Problem1D b = a;
    b.grid = build_grid(a.grid.map, 321, 30.0);
    b.rhs = field_from_x(b.grid, 1, [&](double x, int) {
      return std::exp(b.grid.map.forward(x));
    });
    Solution1D sa = solve_1d(a), sb = solve_1d(b);
    double worst = 0.0;
    for (int k = 0; k < 257; ++k)
      worst = std::max(worst,
                       std::abs(sa.u.values[k] - sb.u.values[k + 64]));
    CHECK(worst < 1e-8);
  }

  TEST_CASE("parameter validation") {
    Problem1D p = ref::manufactured_1d(65);
    p.t = 0.5;  // only the parametric form takes t
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = ref::manufactured_1d(65);
    p.exponent = 1.2;  // at p = 4 the lower edge is 1.25
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = ref::manufactured_1d(6);
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }

  TEST_CASE("boundary functional with a first-order term") {
    Problem1D p = ref::tsweep_base(129);
    p.t = 0.01;
    Solution1D s = solve_1d(p);
    CHECK(s.residual <= 1e-10);
    // sum_i t^{sigma_i} delta_i u^{[i]} = data at the solid end
    int last = p.grid.n - 1;
    double s0 = std::pow(p.t, sigma_trace(0, p.exponent, p.p));
    double s1 = std::pow(p.t, sigma_trace(1, p.exponent, p.p));
    for (int e = 0; e < p.op.dim(); ++e) {
      C lhs = s0 * p.bc.delta[0] * s.u.at(last, e) +
              s1 * p.bc.delta[1] * s.u1.at(last, e);
      CHECK(std::abs(lhs - p.bc.data[e]) < 1e-8);
    }
  }
}

TEST_SUITE("solve2d") {
  TEST_CASE("linearity of the solve") {
    Problem2D p = ref::separable_2d(17);
    Solution2D s1 = solve_2d_direct(p);
    for (auto& v : p.rhs.values) v *= 3.0;
    Solution2D s3 = solve_2d_direct(p);
    ComplexField scaled = s1.u;
    for (auto& v : scaled.values) v *= 3.0;
    CHECK(rel_diff(s3.u, scaled) < 1e-12);
  }

  TEST_CASE("zero data gives the zero solution") {
    Problem2D p = ref::separable_2d(17);
    for (auto& v : p.rhs.values) v = 0.0;
    Solution2D s = solve_2d_direct(p);
    for (auto& v : s.u.values) CHECK(std::abs(v) == 0.0);
  }

  TEST_CASE("admissible window is enforced") {
    try {
      validate_exponent_window(1.6, 4.0, "alpha");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("admissible window") !=
            std::string::npos);
    }
    CHECK_THROWS_AS(validate_exponent_window(1.2, 4.0, "alpha"),
                    ValidationError);
    CHECK_NOTHROW(validate_exponent_window(1.3, 4.0, "alpha"));
  }

  TEST_CASE("reduced route agrees with the direct solve") {
    Problem2D p = ref::separable_2d(33);
    Solution2D a = solve_2d_direct(p);
    Solution2D b = solve_2d_reduced(p);
    CHECK(rel_diff(b.u, a.u) < 1e-10);
  }

  TEST_CASE("moving pullback at scale one is the identity") {
    Problem2D direct = ref::direct_scaled(1.0, 17);
    Solution2D a = solve_2d_direct(direct);
    Solution2D b = solve_moving(ref::moving_problem(1.0, 17));
    CHECK(rel_diff(b.u, a.u) < 1e-12);
  }
}

TEST_SUITE("verify") {
  TEST_CASE("coercivity report composition") {
    Problem1D p = ref::sweep_base_1d(129);
    Solution1D s = solve_1d(p);
    CoercivityReport r = coercivity_report(p, s);
    CHECK(r.dims == 1);
    CHECK(r.residual <= 1e-10);
    CHECK(r.ratio > 0.0);
    // at t = 1 the two weight conventions coincide
    CHECK(r.ratio == doctest::Approx(r.ratio_alt));
    CHECK(r.denominator == doctest::Approx(r.f_norm));  // zero boundary data
  }

  TEST_CASE("small sweep carries no growth flag") {
    SectorSpec sector{M_PI / 3.0, {1.0, 100.0, 10000.0}, {0.0, M_PI / 6.0}};
    SweepResult res = sweep_lambda(ref::sweep_base_1d(65), sector);
    CHECK(res.summary.failures == 0);
    CHECK(!res.summary.growth_flag);
    CHECK(res.reports.size() == 6);
    CHECK(res.summary.max_ratio >= res.summary.median_ratio);
  }

  TEST_CASE("t-scaled data terms shrink with t") {
    Problem1D p = ref::tsweep_base(129);
    p.t = 1e-4;
    CoercivityReport small = coercivity_report(p, solve_1d(p));
    p.t = 1.0;
    CoercivityReport one = coercivity_report(p, solve_1d(p));
    CHECK(small.f1x_lambda <
          one.f1x_lambda * std::pow(1e-4, 1.0 / 8.0) * 1.0001);
    CHECK(small.f1x_lambda > 0.0);
  }
}

TEST_SUITE("nonlinear") {
  TEST_CASE("state law from an expression") {
    StateLaw law = law_from_expression(dsl::parse("0.5*u*u", dsl::kStateVariables));
    StateArgs a{};
    a.u = 3.0;
    CHECK(law(a) == doctest::Approx(4.5));
    CHECK_THROWS_AS(law_from_expression(dsl::parse("t + 1")), ValidationError);
  }

  TEST_CASE("iteration converges to the constant manufactured state") {
    NonlinearSpec spec = ref::nonlinear_toy(0.1, 17);
    PicardResult res = picard_solve(spec);
    CHECK(res.trace.converged);
    // u == 1 away from the truncation ends, where the pinned rows force a
    // boundary layer decaying at rate sqrt(A + lambda)
    const Grid2D& g = spec.base.grids;
    double worst = 0.0;
    for (int ix = 0; ix < g.gx.n; ++ix)
      for (int iy = 0; iy < g.gy.n; ++iy)
        if (g.gx.y_nodes[ix] >= -8.0 && g.gy.y_nodes[iy] >= -8.0)
          worst = std::max(
              worst, std::abs(res.solution.u.at(ix * g.gy.n + iy, 0) - 1.0));
    CHECK(worst < 1e-4);
    // deltas shrink monotonically after the first step
    for (std::size_t i = 2; i < res.trace.records.size(); ++i)
      CHECK(res.trace.records[i].delta_y < res.trace.records[i - 1].delta_y);
  }

  TEST_CASE("ball certificate") {
    NonlinearSpec spec = ref::nonlinear_toy(0.1, 17);
    PicardResult res = picard_solve(spec);
    double mu = lipschitz_probe(spec, 100, 7u, 0.5);
    BallReport ball = ball_check(res.trace, spec.ball_radius, mu);
    CHECK(ball.stayed_in_ball);
    CHECK(ball.c0 == doctest::Approx(res.trace.c0_observed));
    CHECK(ball.mu_hat == doctest::Approx(mu));
  }

  TEST_CASE("divergence throws with the trace attached") {
    try {
      picard_solve(ref::nonlinear_toy(ref::kDivergentEps, 17));
      FAIL("expected divergence");
    } catch (const DivergenceError& e) {
      CHECK(e.trace().records.size() >= 3);
      CHECK(!e.trace().converged);
    }
  }
}

TEST_SUITE("sysinf") {
  TEST_CASE("diagonal law validation") {
    SystemSpec s = ref::decay_fixture();
    s.d_law = dsl::parse("1/m");  // decreasing
    CHECK_THROWS_AS(s.diagonal(4), ValidationError);
    s.d_law = dsl::parse("m-3");  // not positive at m = 1
    CHECK_THROWS_AS(s.diagonal(4), ValidationError);
  }

  TEST_CASE("decay condition distinguishes summable couplings") {
    std::vector<int> ns{4, 8, 16, 32};
    DecayReport good = decay_condition_check(ref::decay_fixture(), ns);
    CHECK(good.finite);
    CHECK(good.sup_a > 0.0);
    DecayReport bad = decay_condition_check(ref::decay_divergent(), ns);
    CHECK(!bad.finite);
    CHECK(bad.growth_vs_n.back().sup_a > 2.0 * bad.growth_vs_n.front().sup_a);
  }

  TEST_CASE("instantiated truncation uses the diagonal norm") {
    SystemSpec s = ref::system_reference(4, 9);
    Problem2D p = s.instantiate(4);
    CHECK(p.op.dim() == 4);
    CHECK(p.op.kind() == OperatorSpec::Kind::Diagonal);
    CHECK(p.enorm.d.empty());
    CHECK(p.enorm.q == doctest::Approx(s.q));
    CHECK_NOTHROW(p.validate());
  }

  TEST_CASE("truncation study needs compactly supported data") {
    SystemSpec s = ref::system_reference(8, 9);
    s.rhs_support = 0;
    std::vector<int> ns{4, 8};
    CHECK_THROWS_AS(truncation_study(s, ns), ValidationError);
  }
}

TEST_SUITE("config") {
  Json solve1d_doc() {
    return Json{{"seed", 7},
                {"out", "unused"},
                {"problem",
                 Json{{"kind", "regularized"},
                      {"exponent", 1.3},
                      {"p", 4.0},
                      {"basepoint", 1.0},
                      {"operator", Json{{"scalar", 1.0}}},
                      {"lambda", 1.0},
                      {"rhs", "exp(-x)"},
                      {"mesh", Json{{"n", 65}, {"depth", 11.5}}}}}};
  }

  TEST_CASE("unknown keys are rejected with their path") {
    Json doc = solve1d_doc();
    doc["problem"]["alfa"] = 1.5;
    try {
      parse_config(doc, "solve1d");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("alfa") != std::string::npos);
    }
  }

  TEST_CASE("window violations surface at load time") {
    Json doc{{"problem",
              Json{{"alpha", 1.6},
                   {"operator", Json{{"scalar", 1.0}}},
                   {"lambda", 100.0},
                   {"rhs", "1"},
                   {"basepoint_x", 1.0},
                   {"basepoint_y", 1.0},
                   {"mesh", Json{{"nx", 17}, {"ny", 17}}}}}};
    try {
      parse_config(doc, "solve2d");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("admissible window") !=
            std::string::npos);
    }
  }

  TEST_CASE("echo closure") {
    RunConfig first = parse_config(solve1d_doc(), "solve1d");
    RunConfig second = parse_config(first.echo, "solve1d");
    CHECK(first.echo.dump() == second.echo.dump());
    REQUIRE(first.p1.has_value());
    CHECK(first.p1->grid.n == 65);
  }

  TEST_CASE("subcommand must agree with the document") {
    Json doc = solve1d_doc();
    doc["subcommand"] = "sweep-lambda";
    CHECK_THROWS_AS(parse_config(doc, "solve1d"), ValidationError);
  }

  TEST_CASE("complex entries parse as [re, im] pairs") {
    Json doc = solve1d_doc();
    doc["problem"]["lambda"] = Json::array({2.0, 5.0});
    doc["problem"]["bc"] =
        Json{{"order", 1}, {"delta", Json::array({1.0, Json::array({0.0, -1.0})})},
             {"data", Json::array({0.5})}};
    RunConfig cfg = parse_config(doc, "solve1d");
    CHECK(cfg.p1->lambda == C(2.0, 5.0));
    CHECK(cfg.p1->bc.delta[1] == C(0.0, -1.0));
  }

  TEST_CASE("depth rule failure names the key") {
    Json doc = solve1d_doc();
    // an indefinite operator spoils the decay-based default depth (scalar
    // and diagonal forms are rejected as non-positive before it matters)
    doc["problem"]["operator"] =
        Json{{"dense", Json::array({Json::array({0.5, 2.0}),
                                    Json::array({2.0, 0.5})})}};
    doc["problem"]["mesh"] = Json{{"n", 65}};
    try {
      parse_config(doc, "solve1d");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("depth") != std::string::npos);
    }
  }
}
