#include "degen/solve1d.hpp"

#include <cmath>
#include <string>

namespace degen {

void BoundarySpec::validate(int dim_e) const {
  if (order != 0 && order != 1)
    throw ValidationError("boundary functional order must be 0 or 1");
  if (static_cast<int>(delta.size()) != order + 1)
    throw ValidationError("boundary needs " + std::to_string(order + 1) +
                          " coefficients, got " + std::to_string(delta.size()));
  if (std::abs(delta.back()) == 0.0)
    throw ValidationError("leading boundary coefficient must be non-zero");
  if (!data.empty() && static_cast<int>(data.size()) != dim_e)
    throw ValidationError("boundary data length does not match dim");
  for (double v : data)
    if (!std::isfinite(v))
      throw ValidationError("boundary data must be finite");
}

void Problem1D::validate() const {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ValidationError("integrability index p must lie in (1, inf)");
  if (!(exponent > 1.0 + 1.0 / p))
    throw ValidationError(
        "grading exponent " + std::to_string(exponent) +
        " outside the admissible range (needs exponent > 1 + 1/p = " +
        std::to_string(1.0 + 1.0 / p) + ")");
  if (std::abs(grid.map.gamma() - exponent) > 1e-12)
    throw ValidationError("grid transform grading does not match the problem");
  if (grid.n < 8) throw ValidationError("solver grids need at least 8 nodes");
  if (kind == Form1D::Parametric) {
    if (!(t > 0.0) || !(t <= 1.0))
      throw ValidationError("parameter t must lie in (0, 1]");
  } else if (t != 1.0) {
    throw ValidationError("t is only meaningful for the parametric form");
  }
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw ValidationError("lambda must be finite");
  enorm.validate(op.dim());
  bc.validate(op.dim());
  if (rhs.dim_e != op.dim() ||
      static_cast<int>(rhs.values.size()) != grid.n * op.dim())
    throw ValidationError("rhs field does not match grid and operator dim");
}

Assembled assemble_1d(const Problem1D& p) {
  p.validate();
  const int n = p.grid.n;
  const int de = p.op.dim();
  const double h = p.grid.h;
  const double alpha = p.exponent;
  auto idx = [de](int node, int e) { return node * de + e; };

  Assembled out;
  out.size = n * de;
  out.rhs = Eigen::VectorXcd::Zero(out.size);
  auto& trip = out.triplets;
  trip.reserve(static_cast<std::size_t>(out.size) * (3 + de));

  // truncation end: u = 0
  for (int e = 0; e < de; ++e) trip.emplace_back(idx(0, e), idx(0, e), 1.0);

  const double diff = p.kind == Form1D::Parametric ? p.t : 1.0;
  const double ih2 = 1.0 / (h * h);
  for (int k = 1; k + 1 < n; ++k) {
    // -diff * u_yy, plus the drift alpha x^{alpha-1} u_y for the plain form
    double lo = -diff * ih2, mid = 2.0 * diff * ih2, hiv = -diff * ih2;
    if (p.kind == Form1D::Plain) {
      double drift = alpha * std::pow(p.grid.x_nodes[k], alpha - 1.0);
      lo += -drift / (2.0 * h);
      hiv += drift / (2.0 * h);
    }
    for (int e = 0; e < de; ++e) {
      int r = idx(k, e);
      trip.emplace_back(r, idx(k - 1, e), lo);
      trip.emplace_back(r, idx(k + 1, e), hiv);
      trip.emplace_back(r, idx(k, e), mid + p.lambda);
      for (int e2 = 0; e2 < de; ++e2) {
        double a = p.op.entry(e, e2);
        if (a != 0.0) trip.emplace_back(r, idx(k, e2), a);
      }
      out.rhs[r] = p.rhs.at(k, e);
    }
  }

  // boundary functional at x = a (y = 0)
  std::vector<std::complex<double>> coef(p.bc.delta);
  if (p.bc.t_scaled) {
    for (int i = 0; i <= p.bc.order; ++i)
      coef[static_cast<std::size_t>(i)] *=
          std::pow(p.t, sigma_trace(i, p.exponent, p.p));
  }
  for (int e = 0; e < de; ++e) {
    int r = idx(n - 1, e);
    std::complex<double> c0 = coef[0];
    if (p.bc.order == 1) {
      // one-sided first derivative in y; x^{alpha - gamma} = 1 at x = a
      // when the grading matches the transform
      std::complex<double> c1 = coef[1] / (2.0 * h);
      trip.emplace_back(r, idx(n - 1, e), c0 + 3.0 * c1);
      trip.emplace_back(r, idx(n - 2, e), -4.0 * c1);
      trip.emplace_back(r, idx(n - 3, e), c1);
    } else {
      trip.emplace_back(r, idx(n - 1, e), c0);
    }
    out.rhs[r] = p.bc.data.empty() ? 0.0 : p.bc.data[static_cast<std::size_t>(e)];
  }
  return out;
}

namespace {

double relative_residual(const Assembled& a, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd mx = Eigen::VectorXcd::Zero(a.size);
  for (const auto& t : a.triplets) mx[t.row()] += t.value() * x[t.col()];
  double num = (mx - a.rhs).norm();
  double den = a.rhs.norm();
  return den > 0.0 ? num / den : num;
}

}  // namespace

Solution1D solve_1d(const Problem1D& p) {
  Assembled sys = assemble_1d(p);
  SparseComplexLU lu(sys.size, sys.triplets);
  Eigen::VectorXcd x = lu.solve(sys.rhs);
  double resid = relative_residual(sys, x);
  if (!(resid <= 1e-10))
    throw SolveError("linear residual " + std::to_string(resid) +
                     " above tolerance 1e-10");

  Solution1D sol;
  sol.grid = p.grid;
  sol.residual = resid;
  const int de = p.op.dim();
  sol.u.dim_e = de;
  sol.u.values.assign(x.data(), x.data() + x.size());
  sol.u1 = reg_derivative(sol.u, p.grid, p.exponent, 1);
  sol.u2 = reg_derivative(sol.u, p.grid, p.exponent, 2);
  sol.au.dim_e = de;
  sol.au.values.resize(sol.u.values.size());
  for (int k = 0; k < p.grid.n; ++k) {
    std::span<const std::complex<double>> in(
        sol.u.values.data() + static_cast<std::size_t>(k) * de,
        static_cast<std::size_t>(de));
    std::span<std::complex<double>> outp(
        sol.au.values.data() + static_cast<std::size_t>(k) * de,
        static_cast<std::size_t>(de));
    p.op.apply(in, outp);
  }
  return sol;
}

}  // namespace degen
