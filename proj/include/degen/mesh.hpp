#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "degen/errors.hpp"

namespace degen {

// The substitution y(x) = (x^{1-g} - a^{1-g})/(1-g), g > 1, which turns the
// graded derivative x^g d/dx into d/dy.  y(a) = 0 and y -> -inf as x -> 0+,
// so the degenerate end of (0, a] maps to a half-line that gets truncated.
class TransformMap {
 public:
  TransformMap() : TransformMap(2.0, 1.0) {}
  TransformMap(double gamma, double a);

  double forward(double x) const;   // y(x)
  double inverse(double y) const;   // x(y), positive for y > -infty
  double gamma() const { return gamma_; }
  double basepoint() const { return a_; }

 private:
  double gamma_;
  double a_;
};

TransformMap build_transform(double gamma, double a);

struct Grid1D {
  TransformMap map;
  std::vector<double> y_nodes;  // uniform, ascending, [-depth, 0]
  std::vector<double> x_nodes;  // inverse images, ascending, all > 0
  std::vector<double> weights;  // x-measure cell masses; sum = x_n - x_0
  double h = 0.0;               // y spacing
  int n = 0;                    // node count

  double depth() const { return -y_nodes.front(); }
};

// n nodes (n >= 2) on y in [-depth, 0].
Grid1D build_grid(const TransformMap& map, int n, double depth);

struct Grid2D {
  Grid1D gx, gy;
  int nodes() const { return gx.n * gy.n; }
};

Grid2D build_grid2(const TransformMap& mx, int nx, double depth_x,
                   const TransformMap& my, int ny, double depth_y);

// Nodal values with dim_e components per node, component index fastest.
// 2D fields use node = ix * ny + iy.
template <class Scalar>
struct FieldT {
  std::vector<Scalar> values;
  int dim_e = 1;

  int nodes() const {
    return dim_e > 0 ? static_cast<int>(values.size()) / dim_e : 0;
  }
  Scalar& at(int node, int comp) {
    return values[static_cast<std::size_t>(node) * dim_e + comp];
  }
  const Scalar& at(int node, int comp) const {
    return values[static_cast<std::size_t>(node) * dim_e + comp];
  }
};

using DiscreteField = FieldT<double>;
using ComplexField = FieldT<std::complex<double>>;

DiscreteField field_from_x(const Grid1D& g, int dim_e,
                           const std::function<double(double, int)>& f);
DiscreteField field_from_xy(const Grid2D& g, int dim_e,
                            const std::function<double(double, double, int)>& f);

// l_q norm over the components of one nodal value, optionally with positive
// diagonal weights d (the norm of the sequence {d_m v_m}).
struct ComponentNorm {
  double q = 2.0;
  std::vector<double> d;  // empty = unweighted

  double operator()(std::span<const double> v) const;
  double operator()(std::span<const std::complex<double>> v) const;
  void validate(int dim_e) const;
};

// Graded derivative (x^alpha d/dx)^order via the transformed coordinate:
// first order is x^{alpha-g} u_y, second order adds the commutator term
// (alpha-g) x^{2 alpha - g - 1} u_y.  Second-order stencils, one-sided at
// the ends (requires n >= 4).
DiscreteField reg_derivative(const DiscreteField& u, const Grid1D& g,
                             double alpha, int order);
ComplexField reg_derivative(const ComplexField& u, const Grid1D& g,
                            double alpha, int order);

// Along x (dim 0) or y (dim 1) of a 2D grid.
DiscreteField reg_derivative2(const DiscreteField& u, const Grid2D& g,
                              double exponent, int order, int dim);
ComplexField reg_derivative2(const ComplexField& u, const Grid2D& g,
                             double exponent, int order, int dim);

// Discrete weighted L_p norm: p-th power of the component norm summed with
// the x-measure weights.  Rejects non-finite values.
double weighted_lp_norm(const DiscreteField& u, const Grid1D& g, double p,
                        const ComponentNorm& enorm);
double weighted_lp_norm(const ComplexField& u, const Grid1D& g, double p,
                        const ComponentNorm& enorm);
double weighted_lp_norm(const DiscreteField& u, const Grid2D& g, double p,
                        const ComponentNorm& enorm);
double weighted_lp_norm(const ComplexField& u, const Grid2D& g, double p,
                        const ComponentNorm& enorm);

// Depth making exp(-sqrt(delta) * depth) < 1e-10; delta is the decay rate
// floor (least eigenvalue of A plus the least Re lambda of the run).
double default_depth(double delta);

}  // namespace degen
