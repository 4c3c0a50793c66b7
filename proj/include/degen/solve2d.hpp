#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "degen/dsl.hpp"
#include "degen/linsolve.hpp"
#include "degen/mesh.hpp"
#include "degen/opspace.hpp"
#include "degen/solve1d.hpp"

namespace degen {

// Admissible grading window for the 2D theory: 1 + 1/p < e < (p-1)/2.
void validate_exponent_window(double exponent, double p, const char* which);

// Operator-valued lower-order coefficient.  Either scale(x, y) * base, or an
// entry law a(m, j, x, y) over a dim x dim block (indices 1-based).
struct CoeffBlock {
  OperatorSpec base;
  dsl::Expression scale;      // empty = 1
  dsl::Expression entry_law;  // non-empty selects the entry-law form
  int dim = 1;

  // used by the moving-domain rescale
  double coord_scale_x = 1.0, coord_scale_y = 1.0, out_scale = 1.0;

  bool entry_form() const { return !entry_law.empty(); }
  bool xy_dependent() const;
  Eigen::MatrixXd value_at(double x, double y) const;
  void validate(int dim_e) const;
};

struct MovingDomain {
  dsl::Expression a_of_s;  // right endpoint law in s
  dsl::Expression b_of_s;
  double s = 0.0;
};

struct Problem2D {
  double alpha = 2.0, beta = 2.0;
  double p = 4.0;
  ComponentNorm enorm;
  OperatorSpec op;
  std::optional<CoeffBlock> a1, a2;  // coefficients of u^{[1]}_x and u^{[1]}_y
  std::complex<double> lambda{0.0, 0.0};
  double t1 = 1.0, t2 = 1.0;
  BoundarySpec bcx, bcy;  // functionals at x = a and y = b
  double mu = 0.25;       // exponent in the coefficient-boundedness check
  double coeff_bound_limit = std::numeric_limits<double>::infinity();
  DiscreteField rhs;
  dsl::Expression rhs_law;  // optional; required by the moving-domain route
  Grid2D grids;
  std::optional<MovingDomain> moving;

  void validate() const;
};

// Evaluate rhs_law (variables x, y and the 1-based component index m) onto
// the problem grids.
void materialize_rhs(Problem2D& p);

struct Solution2D {
  ComplexField u, ux1, ux2, uy1, uy2, au;
  double residual = 0.0;
  double lower_order_value = 0.0;  // sup of the coefficient-boundedness check
  bool coercivity_warning = false;
  std::string warning;
  Grid2D grids;
};

// Node layout: node = ix * ny + iy, components fastest.  Row priority:
// x-functional at ix = nx-1 (corners included), truncation at ix = 0, then
// the y-functional at iy = ny-1, truncation at iy = 0, else interior.
Assembled assemble_2d(const Problem2D& p);

// Derived fields (graded derivatives, A u, coefficient-bound warning) for a
// solution vector in the layout above; p must already be validated.
Solution2D make_solution(const Problem2D& p, const Eigen::VectorXcd& x,
                         double residual);

// One sparse factorization of the full coupled system.
Solution2D solve_2d_direct(const Problem2D& p);

// Diagonalize A, solve one scalar problem per spectral component, and
// transform back.  Lower-order coefficients must be component-decoupled
// (scalar laws, or diagonal with a diagonal A).
Solution2D solve_2d_reduced(const Problem2D& p);

// Pull a problem posed on (0, a(s)) x (0, b(s)) back to the unit reference
// domain: t_k and the boundary functionals pick up powers of the endpoint,
// the equation is solved there, and the fields are pushed forward again.
Solution2D solve_moving(const Problem2D& p);

// sup over interior nodes and i of the row-sum norm of C_i(x,y) A^{-(1/2-mu)}.
double lower_order_bound(const Problem2D& p);

}  // namespace degen
