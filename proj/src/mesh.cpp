#include "degen/mesh.hpp"

#include <cmath>
#include <string>

namespace degen {

TransformMap::TransformMap(double gamma, double a) : gamma_(gamma), a_(a) {
  if (!(gamma > 1.0))
    throw ValidationError("transform exponent must exceed 1, got " +
                          std::to_string(gamma));
  if (!(a > 0.0))
    throw ValidationError("interval endpoint must be positive, got " +
                          std::to_string(a));
}

double TransformMap::forward(double x) const {
  if (!(x > 0.0)) throw ValidationError("transform argument must be positive");
  return (std::pow(x, 1.0 - gamma_) - std::pow(a_, 1.0 - gamma_)) /
         (1.0 - gamma_);
}

double TransformMap::inverse(double y) const {
  double base = std::pow(a_, 1.0 - gamma_) + (1.0 - gamma_) * y;
  // base > 0 for every finite y <= 0 since gamma > 1.
  if (!(base > 0.0))
    throw ValidationError("transform inverse undefined at y = " +
                          std::to_string(y));
  return std::pow(base, 1.0 / (1.0 - gamma_));
}

TransformMap build_transform(double gamma, double a) {
  return TransformMap(gamma, a);
}

Grid1D build_grid(const TransformMap& map, int n, double depth) {
  if (n < 2) throw ValidationError("grid needs at least 2 nodes");
  if (!(depth > 0.0)) throw ValidationError("grid depth must be positive");
  Grid1D g;
  g.map = map;
  g.n = n;
  g.h = depth / (n - 1);
  g.y_nodes.resize(n);
  g.x_nodes.resize(n);
  for (int k = 0; k < n; ++k) {
    // exact 0 at the right end; uniform spacing elsewhere
    g.y_nodes[k] = (k == n - 1) ? 0.0 : -depth + k * g.h;
    g.x_nodes[k] = map.inverse(g.y_nodes[k]);
  }
  // cell-mass weights in the x measure: half-cells at the ends.  They sum
  // to x_n - x_0 exactly, stay positive, and are second-order accurate.
  g.weights.resize(n);
  if (n == 2) {
    double half = 0.5 * (g.x_nodes[1] - g.x_nodes[0]);
    g.weights[0] = g.weights[1] = half;
  } else {
    g.weights[0] = 0.5 * (g.x_nodes[1] - g.x_nodes[0]);
    for (int k = 1; k + 1 < n; ++k)
      g.weights[k] = 0.5 * (g.x_nodes[k + 1] - g.x_nodes[k - 1]);
    g.weights[n - 1] = 0.5 * (g.x_nodes[n - 1] - g.x_nodes[n - 2]);
  }
  return g;
}

Grid2D build_grid2(const TransformMap& mx, int nx, double depth_x,
                   const TransformMap& my, int ny, double depth_y) {
  return Grid2D{build_grid(mx, nx, depth_x), build_grid(my, ny, depth_y)};
}

DiscreteField field_from_x(const Grid1D& g, int dim_e,
                           const std::function<double(double, int)>& f) {
  DiscreteField out;
  out.dim_e = dim_e;
  out.values.resize(static_cast<std::size_t>(g.n) * dim_e);
  for (int k = 0; k < g.n; ++k)
    for (int e = 0; e < dim_e; ++e) out.at(k, e) = f(g.x_nodes[k], e);
  return out;
}

DiscreteField field_from_xy(
    const Grid2D& g, int dim_e,
    const std::function<double(double, double, int)>& f) {
  DiscreteField out;
  out.dim_e = dim_e;
  out.values.resize(static_cast<std::size_t>(g.nodes()) * dim_e);
  for (int ix = 0; ix < g.gx.n; ++ix)
    for (int iy = 0; iy < g.gy.n; ++iy)
      for (int e = 0; e < dim_e; ++e)
        out.at(ix * g.gy.n + iy, e) = f(g.gx.x_nodes[ix], g.gy.x_nodes[iy], e);
  return out;
}

void ComponentNorm::validate(int dim_e) const {
  if (!(q > 1.0) || !std::isfinite(q))
    throw ValidationError("component norm index q must lie in (1, inf)");
  if (!d.empty()) {
    if (static_cast<int>(d.size()) != dim_e)
      throw ValidationError("component weight count " +
                            std::to_string(d.size()) +
                            " does not match dim " + std::to_string(dim_e));
    for (double w : d)
      if (!(w > 0.0))
        throw ValidationError("component weights must be positive");
  }
}

namespace {

template <class Scalar>
double cnorm_impl(const ComponentNorm& cn, std::span<const Scalar> v) {
  if (!cn.d.empty() && cn.d.size() != v.size())
    throw ValidationError("component weight count does not match value count");
  if (v.size() == 1) {
    double a = std::abs(v[0]);
    return cn.d.empty() ? a : cn.d[0] * a;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]);
    if (!cn.d.empty()) a *= cn.d[i];
    s += std::pow(a, cn.q);
  }
  return std::pow(s, 1.0 / cn.q);
}

template <class Scalar>
void check_field(const FieldT<Scalar>& u, int nodes, const char* who) {
  if (u.dim_e < 1) throw ValidationError(std::string(who) + ": bad dim");
  if (static_cast<int>(u.values.size()) != nodes * u.dim_e)
    throw ValidationError(std::string(who) +
                          ": field length does not match grid");
}

// d/dy and d2/dy2 on the uniform y grid, second order, one-sided at ends.
template <class Scalar>
std::vector<Scalar> dy1(const FieldT<Scalar>& u, int n, int dim_e, double h) {
  std::vector<Scalar> out(u.values.size());
  auto v = [&](int k, int e) { return u.at(k, e); };
  for (int e = 0; e < dim_e; ++e) {
    out[static_cast<std::size_t>(0) * dim_e + e] =
        (-3.0 * v(0, e) + 4.0 * v(1, e) - v(2, e)) / (2.0 * h);
    for (int k = 1; k + 1 < n; ++k)
      out[static_cast<std::size_t>(k) * dim_e + e] =
          (v(k + 1, e) - v(k - 1, e)) / (2.0 * h);
    out[static_cast<std::size_t>(n - 1) * dim_e + e] =
        (3.0 * v(n - 1, e) - 4.0 * v(n - 2, e) + v(n - 3, e)) / (2.0 * h);
  }
  return out;
}

template <class Scalar>
std::vector<Scalar> dy2(const FieldT<Scalar>& u, int n, int dim_e, double h) {
  std::vector<Scalar> out(u.values.size());
  auto v = [&](int k, int e) { return u.at(k, e); };
  double h2 = h * h;
  for (int e = 0; e < dim_e; ++e) {
    out[static_cast<std::size_t>(0) * dim_e + e] =
        (2.0 * v(0, e) - 5.0 * v(1, e) + 4.0 * v(2, e) - v(3, e)) / h2;
    for (int k = 1; k + 1 < n; ++k)
      out[static_cast<std::size_t>(k) * dim_e + e] =
          (v(k + 1, e) - 2.0 * v(k, e) + v(k - 1, e)) / h2;
    out[static_cast<std::size_t>(n - 1) * dim_e + e] =
        (2.0 * v(n - 1, e) - 5.0 * v(n - 2, e) + 4.0 * v(n - 3, e) -
         v(n - 4, e)) /
        h2;
  }
  return out;
}

template <class Scalar>
FieldT<Scalar> reg_derivative_impl(const FieldT<Scalar>& u, const Grid1D& g,
                                   double alpha, int order) {
  check_field(u, g.n, "reg_derivative");
  if (order != 1 && order != 2)
    throw ValidationError("derivative order must be 1 or 2");
  if (g.n < 4)
    throw ValidationError("grid too small for derivative stencils (need 4)");
  double gam = g.map.gamma();
  FieldT<Scalar> out;
  out.dim_e = u.dim_e;
  if (order == 1) {
    out.values = dy1(u, g.n, u.dim_e, g.h);
    for (int k = 0; k < g.n; ++k) {
      double c = std::pow(g.x_nodes[k], alpha - gam);
      for (int e = 0; e < u.dim_e; ++e) out.at(k, e) *= c;
    }
  } else {
    out.values = dy2(u, g.n, u.dim_e, g.h);
    std::vector<Scalar> first = dy1(u, g.n, u.dim_e, g.h);
    for (int k = 0; k < g.n; ++k) {
      double x = g.x_nodes[k];
      double c2 = std::pow(x, 2.0 * (alpha - gam));
      double c1 = (alpha - gam) * std::pow(x, 2.0 * alpha - gam - 1.0);
      for (int e = 0; e < u.dim_e; ++e)
        out.at(k, e) = c2 * out.at(k, e) +
                       c1 * first[static_cast<std::size_t>(k) * u.dim_e + e];
    }
  }
  return out;
}

template <class Scalar>
FieldT<Scalar> reg_derivative2_impl(const FieldT<Scalar>& u, const Grid2D& g,
                                    double exponent, int order, int dim) {
  check_field(u, g.nodes(), "reg_derivative2");
  if (dim != 0 && dim != 1)
    throw ValidationError("derivative direction must be 0 (x) or 1 (y)");
  const Grid1D& line = dim == 0 ? g.gx : g.gy;
  int n_other = dim == 0 ? g.gy.n : g.gx.n;
  FieldT<Scalar> out;
  out.dim_e = u.dim_e;
  out.values.resize(u.values.size());
  FieldT<Scalar> slice;
  slice.dim_e = u.dim_e;
  slice.values.resize(static_cast<std::size_t>(line.n) * u.dim_e);
  for (int o = 0; o < n_other; ++o) {
    for (int k = 0; k < line.n; ++k) {
      int node = dim == 0 ? k * g.gy.n + o : o * g.gy.n + k;
      for (int e = 0; e < u.dim_e; ++e) slice.at(k, e) = u.at(node, e);
    }
    FieldT<Scalar> ds = reg_derivative_impl(slice, line, exponent, order);
    for (int k = 0; k < line.n; ++k) {
      int node = dim == 0 ? k * g.gy.n + o : o * g.gy.n + k;
      for (int e = 0; e < u.dim_e; ++e) out.at(node, e) = ds.at(k, e);
    }
  }
  return out;
}

template <class Scalar>
double lp_norm_1d(const FieldT<Scalar>& u, const Grid1D& g, double p,
                  const ComponentNorm& enorm) {
  check_field(u, g.n, "weighted_lp_norm");
  enorm.validate(u.dim_e);
  if (!(p >= 1.0)) throw ValidationError("norm index p must be >= 1");
  for (const auto& v : u.values)
    if (!std::isfinite(std::abs(v)))
      throw ValidationError("weighted_lp_norm: non-finite field value");
  double s = 0.0;
  for (int k = 0; k < g.n; ++k) {
    std::span<const Scalar> comps(u.values.data() +
                                      static_cast<std::size_t>(k) * u.dim_e,
                                  static_cast<std::size_t>(u.dim_e));
    s += g.weights[k] * std::pow(enorm(comps), p);
  }
  return std::pow(s, 1.0 / p);
}

template <class Scalar>
double lp_norm_2d(const FieldT<Scalar>& u, const Grid2D& g, double p,
                  const ComponentNorm& enorm) {
  check_field(u, g.nodes(), "weighted_lp_norm");
  enorm.validate(u.dim_e);
  if (!(p >= 1.0)) throw ValidationError("norm index p must be >= 1");
  for (const auto& v : u.values)
    if (!std::isfinite(std::abs(v)))
      throw ValidationError("weighted_lp_norm: non-finite field value");
  double s = 0.0;
  for (int ix = 0; ix < g.gx.n; ++ix)
    for (int iy = 0; iy < g.gy.n; ++iy) {
      std::span<const Scalar> comps(
          u.values.data() +
              static_cast<std::size_t>(ix * g.gy.n + iy) * u.dim_e,
          static_cast<std::size_t>(u.dim_e));
      s += g.gx.weights[ix] * g.gy.weights[iy] * std::pow(enorm(comps), p);
    }
  return std::pow(s, 1.0 / p);
}

}  // namespace

double ComponentNorm::operator()(std::span<const double> v) const {
  return cnorm_impl(*this, v);
}
double ComponentNorm::operator()(
    std::span<const std::complex<double>> v) const {
  return cnorm_impl(*this, v);
}

DiscreteField reg_derivative(const DiscreteField& u, const Grid1D& g,
                             double alpha, int order) {
  return reg_derivative_impl(u, g, alpha, order);
}
ComplexField reg_derivative(const ComplexField& u, const Grid1D& g,
                            double alpha, int order) {
  return reg_derivative_impl(u, g, alpha, order);
}
DiscreteField reg_derivative2(const DiscreteField& u, const Grid2D& g,
                              double exponent, int order, int dim) {
  return reg_derivative2_impl(u, g, exponent, order, dim);
}
ComplexField reg_derivative2(const ComplexField& u, const Grid2D& g,
                             double exponent, int order, int dim) {
  return reg_derivative2_impl(u, g, exponent, order, dim);
}

double weighted_lp_norm(const DiscreteField& u, const Grid1D& g, double p,
                        const ComponentNorm& enorm) {
  return lp_norm_1d(u, g, p, enorm);
}
double weighted_lp_norm(const ComplexField& u, const Grid1D& g, double p,
                        const ComponentNorm& enorm) {
  return lp_norm_1d(u, g, p, enorm);
}
double weighted_lp_norm(const DiscreteField& u, const Grid2D& g, double p,
                        const ComponentNorm& enorm) {
  return lp_norm_2d(u, g, p, enorm);
}
double weighted_lp_norm(const ComplexField& u, const Grid2D& g, double p,
                        const ComponentNorm& enorm) {
  return lp_norm_2d(u, g, p, enorm);
}

double default_depth(double delta) {
  if (!(delta > 0.0))
    throw ValidationError("depth rule needs a positive decay rate");
  return std::log(1e10) / std::sqrt(delta);
}

}  // namespace degen
