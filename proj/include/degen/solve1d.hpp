#pragma once

#include <complex>
#include <vector>

#include "degen/linsolve.hpp"
#include "degen/mesh.hpp"
#include "degen/opspace.hpp"

namespace degen {

// Boundary functional at the solid end x = a:
//   sum_{i<=order} delta_i u^{[i]}(a) = data   (componentwise),
// with optional parameter scaling delta_i -> t^{sigma_i} delta_i.
struct BoundarySpec {
  int order = 0;
  std::vector<std::complex<double>> delta = {1.0};
  std::vector<double> data;  // one entry per component; empty = zero
  bool t_scaled = false;

  void validate(int dim_e) const;
};

enum class Form1D {
  Regularized,  // -u^{[2]} + (A + lambda) u = f
  Plain,        // -x^{2 alpha} u'' + (A + lambda) u = f
  Parametric,   // -t u^{[2]} + (A + lambda) u = f
};

struct Problem1D {
  Form1D kind = Form1D::Regularized;
  double exponent = 2.0;  // grading; must match the grid transform
  double p = 4.0;         // integrability index of the x-weighted norm
  ComponentNorm enorm;    // component-space norm
  OperatorSpec op;        // A
  std::complex<double> lambda{0.0, 0.0};
  double t = 1.0;  // Parametric only
  BoundarySpec bc;
  DiscreteField rhs;  // f on the grid
  Grid1D grid;

  void validate() const;
};

struct Assembled {
  int size = 0;
  std::vector<CTriplet> triplets;
  Eigen::VectorXcd rhs;
};

// Row layout: node-major, component-fastest.  Row 0 pins the truncation end
// to zero, the last row carries the boundary functional, interior rows the
// transformed equation.
Assembled assemble_1d(const Problem1D& p);

struct Solution1D {
  ComplexField u, u1, u2, au;  // u, u^{[1]}, u^{[2]}, A u
  double residual = 0.0;       // relative algebraic residual
  Grid1D grid;
};

Solution1D solve_1d(const Problem1D& p);

}  // namespace degen
