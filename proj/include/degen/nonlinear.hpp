#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "degen/solve2d.hpp"

namespace degen {

// Point state fed to the nonlinear laws: position, value, and the graded
// first derivatives of the current iterate, per component m (1-based).
struct StateArgs {
  double x = 0.0, y = 0.0;
  double u = 0.0, ux = 0.0, uy = 0.0;
  int m = 1;
};

using StateLaw = std::function<double(const StateArgs&)>;

// Bind a parsed law over {x, y, m, u, ux, uy}.
StateLaw law_from_expression(const dsl::Expression& e);

// Equation: -t1 u^{[2]}_x - t2 u^{[2]}_y + (A + g(state)) u = F(state),
// iterated with A frozen and the perturbation g u moved to the right side.
struct NonlinearSpec {
  Problem2D base;  // operator A, lambda (real), grids, boundary rows
  StateLaw g;      // scalar perturbation; null = 0
  StateLaw force;  // F; required
  double tol = 1e-12;
  int max_iter = 30;
  double ball_radius = std::numeric_limits<double>::infinity();
  bool shrink_retry = false;
  int max_shrink = 4;
};

struct IterationRecord {
  int iter = 0;
  double delta_y = 0.0;  // || u_{n+1} - u_n ||_Y
  double ratio = 0.0;    // delta_n / delta_{n-1}; 0 on the first step
  bool in_ball = true;   // || u_{n+1} - w ||_Y <= ball_radius
  double state_max = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  int shrink_count = 0;
  double c0_observed = 0.0;  // ||w||_Y / ||F(0)||_p from the seed solve
  double w_y_norm = 0.0;
  double f0_norm = 0.0;
  double final_residual = 0.0;  // weighted-L_p norm of M u - rhs(u)
  double implied_radius = 0.0;  // largest state magnitude seen
};

// Divergence (three consecutive expanding steps) aborts with the trace
// attached, after the optional domain-shrink retries are exhausted.
class DivergenceError : public SolveError {
 public:
  DivergenceError(const std::string& what, IterationTrace trace)
      : SolveError(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

 private:
  IterationTrace trace_;
};

struct PicardResult {
  Solution2D solution;
  IterationTrace trace;
};

PicardResult picard_solve(const NonlinearSpec& spec);

// Empirical Lipschitz constant of F: max difference quotient over seeded
// state pairs within `radius` of the seed solve's trace values.
double lipschitz_probe(const NonlinearSpec& spec, int samples, unsigned seed,
                       double radius);

struct BallReport {
  bool stayed_in_ball = false;
  double c0 = 0.0;
  double mu_hat = 0.0;
  double contraction_bound = 0.0;  // c0 * mu_hat
  bool contraction_ok = false;
  double radius = 0.0;
  double implied_radius = 0.0;
  double suggested_radius = 0.0;  // c0 ||F(0)|| / (1 - c0 mu_hat)
};

BallReport ball_check(const IterationTrace& trace, double radius,
                      double mu_hat);

// || v ||_Y = ||v^{[2]}_x|| + ||v^{[2]}_y|| + ||A v|| + ||v|| in the
// problem's weighted L_p norm.
double y_norm(const Problem2D& p, const ComplexField& v);

}  // namespace degen
