#include "degen/solve2d.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace degen {

void validate_exponent_window(double exponent, double p, const char* which) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ValidationError("integrability index p must lie in (1, inf)");
  double lo = 1.0 + 1.0 / p, hi = (p - 1.0) / 2.0;
  if (!(lo < hi))
    throw ValidationError(
        "index p = " + std::to_string(p) +
        " leaves an empty admissible grading window (needs p > (3+sqrt(17))/2)");
  if (!(exponent > lo) || !(exponent < hi))
    throw ValidationError("exponent " + std::string(which) + " = " +
                          std::to_string(exponent) +
                          " outside the admissible window (" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

bool CoeffBlock::xy_dependent() const {
  if (entry_form())
    return entry_law.depends_on("x") || entry_law.depends_on("y");
  return !scale.empty() && (scale.depends_on("x") || scale.depends_on("y"));
}

Eigen::MatrixXd CoeffBlock::value_at(double px, double py) const {
  double x = coord_scale_x * px, y = coord_scale_y * py;
  Eigen::MatrixXd m(dim, dim);
  if (entry_form()) {
    dsl::Bindings env{{"x", x}, {"y", y}};
    for (int r = 0; r < dim; ++r) {
      env["m"] = r + 1;
      for (int c = 0; c < dim; ++c) {
        env["j"] = c + 1;
        m(r, c) = entry_law.evaluate(env);
      }
    }
  } else {
    double s = scale.empty() ? 1.0 : scale.evaluate({{"x", x}, {"y", y}});
    m = s * base.matrix();
  }
  return out_scale * m;
}

void CoeffBlock::validate(int dim_e) const {
  if (dim != dim_e)
    throw ValidationError("coefficient block dim does not match the operator");
  if (entry_form()) {
    if (!scale.empty())
      throw ValidationError(
          "coefficient block cannot carry both an entry law and a scale");
    for (const auto& v : entry_law.variables())
      if (v != "m" && v != "j" && v != "x" && v != "y")
        throw ValidationError("entry law may only use m, j, x, y; found '" +
                              v + "'");
  } else {
    if (base.dim() != dim_e)
      throw ValidationError("coefficient base dim does not match the operator");
    for (const auto& v : scale.variables())
      if (v != "x" && v != "y")
        throw ValidationError("coefficient scale may only use x, y; found '" +
                              v + "'");
  }
}

void Problem2D::validate() const {
  validate_exponent_window(alpha, p, "alpha");
  validate_exponent_window(beta, p, "beta");
  if (std::abs(grids.gx.map.gamma() - alpha) > 1e-12 ||
      std::abs(grids.gy.map.gamma() - beta) > 1e-12)
    throw ValidationError("grid transforms do not match the problem gradings");
  if (grids.gx.n < 8 || grids.gy.n < 8)
    throw ValidationError("solver grids need at least 8 nodes per direction");
  if (!(t1 > 0.0) || !(t1 <= 1.0) || !(t2 > 0.0) || !(t2 <= 1.0))
    throw ValidationError("parameters t1, t2 must lie in (0, 1]");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw ValidationError("lambda must be finite");
  if (!(mu > 0.0) || !(mu < 0.5))
    throw ValidationError("mu must lie in (0, 1/2)");
  enorm.validate(op.dim());
  bcx.validate(op.dim());
  bcy.validate(op.dim());
  if (a1) a1->validate(op.dim());
  if (a2) a2->validate(op.dim());
  if (op.kind() == OperatorSpec::Kind::Dense && !op.spectrum_positive())
    throw ValidationError(
        "dense operator failed the positive-spectrum check required for "
        "coercive problems");
  if (rhs.dim_e != op.dim() ||
      static_cast<int>(rhs.values.size()) != grids.nodes() * op.dim())
    throw ValidationError("rhs field does not match grid and operator dim");
}

void materialize_rhs(Problem2D& p) {
  if (p.rhs_law.empty())
    throw ValidationError("no rhs law to materialize");
  const dsl::Expression& law = p.rhs_law;
  p.rhs = field_from_xy(p.grids, p.op.dim(), [&](double x, double y, int e) {
    return law.evaluate({{"x", x}, {"y", y}, {"m", double(e + 1)}});
  });
}

namespace {

Problem2D prepared(const Problem2D& p) {
  Problem2D q = p;
  if (q.rhs.values.empty() && !q.rhs_law.empty()) materialize_rhs(q);
  q.validate();
  return q;
}

struct BcRow {
  int count = 1;
  int off[3] = {0, 0, 0};
  std::complex<double> c[3];
};

BcRow bc_row(const BoundarySpec& bc, double t, double exponent, double p,
             double h) {
  std::vector<std::complex<double>> coef(bc.delta);
  if (bc.t_scaled)
    for (int i = 0; i < static_cast<int>(coef.size()); ++i)
      coef[static_cast<std::size_t>(i)] *=
          std::pow(t, sigma_trace(i, exponent, p));
  BcRow r;
  if (bc.order == 0) {
    r.count = 1;
    r.off[0] = 0;
    r.c[0] = coef[0];
  } else {
    std::complex<double> c1 = coef[1] / (2.0 * h);
    r.count = 3;
    r.off[0] = 0;
    r.off[1] = -1;
    r.off[2] = -2;
    r.c[0] = coef[0] + 3.0 * c1;
    r.c[1] = -4.0 * c1;
    r.c[2] = c1;
  }
  return r;
}

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double relative_residual(const Assembled& a, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd mx = Eigen::VectorXcd::Zero(a.size);
  for (const auto& t : a.triplets) mx[t.row()] += t.value() * x[t.col()];
  double num = (mx - a.rhs).norm();
  double den = a.rhs.norm();
  return den > 0.0 ? num / den : num;
}

}  // namespace

Solution2D make_solution(const Problem2D& p, const Eigen::VectorXcd& x,
                         double resid) {
  Solution2D s;
  s.grids = p.grids;
  s.residual = resid;
  const int de = p.op.dim();
  s.u.dim_e = de;
  s.u.values.assign(x.data(), x.data() + x.size());
  s.ux1 = reg_derivative2(s.u, p.grids, p.alpha, 1, 0);
  s.ux2 = reg_derivative2(s.u, p.grids, p.alpha, 2, 0);
  s.uy1 = reg_derivative2(s.u, p.grids, p.beta, 1, 1);
  s.uy2 = reg_derivative2(s.u, p.grids, p.beta, 2, 1);
  s.au.dim_e = de;
  s.au.values.resize(s.u.values.size());
  for (int node = 0; node < p.grids.nodes(); ++node) {
    std::span<const std::complex<double>> in(
        s.u.values.data() + static_cast<std::size_t>(node) * de,
        static_cast<std::size_t>(de));
    std::span<std::complex<double>> out(
        s.au.values.data() + static_cast<std::size_t>(node) * de,
        static_cast<std::size_t>(de));
    p.op.apply(in, out);
  }
  if (p.a1 || p.a2) {
    s.lower_order_value = lower_order_bound(p);
    if (!std::isfinite(s.lower_order_value) ||
        s.lower_order_value > p.coeff_bound_limit) {
      s.coercivity_warning = true;
      s.warning =
          "lower-order coefficient bound " +
          std::to_string(s.lower_order_value) +
          " exceeds the configured limit; coercivity is not claimed";
    }
  }
  return s;
}

Assembled assemble_2d(const Problem2D& p) {
  p.validate();
  const int nx = p.grids.gx.n, ny = p.grids.gy.n, de = p.op.dim();
  const double hx = p.grids.gx.h, hy = p.grids.gy.h;
  auto idx = [ny, de](int ix, int iy, int e) {
    return (ix * ny + iy) * de + e;
  };
  Assembled out;
  out.size = nx * ny * de;
  out.rhs = Eigen::VectorXcd::Zero(out.size);
  auto& trip = out.triplets;
  trip.reserve(static_cast<std::size_t>(out.size) * (6 + de));

  const BcRow bx = bc_row(p.bcx, p.t1, p.alpha, p.p, hx);
  const BcRow by = bc_row(p.bcy, p.t2, p.beta, p.p, hy);
  const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);

  const bool c1_const = p.a1 && !p.a1->xy_dependent();
  const bool c2_const = p.a2 && !p.a2->xy_dependent();
  Eigen::MatrixXd c1m, c2m;
  if (c1_const)
    c1m = p.a1->value_at(p.grids.gx.x_nodes[0], p.grids.gy.x_nodes[0]);
  if (c2_const)
    c2m = p.a2->value_at(p.grids.gx.x_nodes[0], p.grids.gy.x_nodes[0]);

  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const int node = ix * ny + iy;
      if (ix == nx - 1) {
        for (int e = 0; e < de; ++e) {
          int r = idx(ix, iy, e);
          for (int k = 0; k < bx.count; ++k)
            trip.emplace_back(r, idx(ix + bx.off[k], iy, e), bx.c[k]);
          out.rhs[r] =
              p.bcx.data.empty() ? 0.0 : p.bcx.data[static_cast<std::size_t>(e)];
        }
        continue;
      }
      if (ix == 0) {
        for (int e = 0; e < de; ++e) {
          int r = idx(ix, iy, e);
          trip.emplace_back(r, r, 1.0);
        }
        continue;
      }
      if (iy == ny - 1) {
        for (int e = 0; e < de; ++e) {
          int r = idx(ix, iy, e);
          for (int k = 0; k < by.count; ++k)
            trip.emplace_back(r, idx(ix, iy + by.off[k], e), by.c[k]);
          out.rhs[r] =
              p.bcy.data.empty() ? 0.0 : p.bcy.data[static_cast<std::size_t>(e)];
        }
        continue;
      }
      if (iy == 0) {
        for (int e = 0; e < de; ++e) {
          int r = idx(ix, iy, e);
          trip.emplace_back(r, r, 1.0);
        }
        continue;
      }
      // interior
      for (int e = 0; e < de; ++e) {
        int r = idx(ix, iy, e);
        trip.emplace_back(r, idx(ix - 1, iy, e), -p.t1 * ihx2);
        trip.emplace_back(r, idx(ix + 1, iy, e), -p.t1 * ihx2);
        trip.emplace_back(r, idx(ix, iy - 1, e), -p.t2 * ihy2);
        trip.emplace_back(r, idx(ix, iy + 1, e), -p.t2 * ihy2);
        trip.emplace_back(r, idx(ix, iy, e),
                          2.0 * p.t1 * ihx2 + 2.0 * p.t2 * ihy2 + p.lambda);
        for (int e2 = 0; e2 < de; ++e2) {
          double a = p.op.entry(e, e2);
          if (a != 0.0) trip.emplace_back(r, idx(ix, iy, e2), a);
        }
        out.rhs[r] = p.rhs.at(node, e);
      }
      if (p.a1) {
        Eigen::MatrixXd m =
            c1_const ? c1m
                     : p.a1->value_at(p.grids.gx.x_nodes[ix],
                                      p.grids.gy.x_nodes[iy]);
        for (int e = 0; e < de; ++e)
          for (int e2 = 0; e2 < de; ++e2) {
            double v = m(e, e2);
            if (v == 0.0) continue;
            trip.emplace_back(idx(ix, iy, e), idx(ix + 1, iy, e2),
                              v / (2.0 * hx));
            trip.emplace_back(idx(ix, iy, e), idx(ix - 1, iy, e2),
                              -v / (2.0 * hx));
          }
      }
      if (p.a2) {
        Eigen::MatrixXd m =
            c2_const ? c2m
                     : p.a2->value_at(p.grids.gx.x_nodes[ix],
                                      p.grids.gy.x_nodes[iy]);
        for (int e = 0; e < de; ++e)
          for (int e2 = 0; e2 < de; ++e2) {
            double v = m(e, e2);
            if (v == 0.0) continue;
            trip.emplace_back(idx(ix, iy, e), idx(ix, iy + 1, e2),
                              v / (2.0 * hy));
            trip.emplace_back(idx(ix, iy, e), idx(ix, iy - 1, e2),
                              -v / (2.0 * hy));
          }
      }
    }
  }
  return out;
}

Solution2D solve_2d_direct(const Problem2D& p0) {
  Problem2D p = prepared(p0);
  Assembled sys = assemble_2d(p);
  SparseComplexLU lu(sys.size, sys.triplets);
  Eigen::VectorXcd x = lu.solve(sys.rhs);
  double resid = relative_residual(sys, x);
  if (!(resid <= 1e-10))
    throw SolveError("linear residual " + std::to_string(resid) +
                     " above tolerance 1e-10");
  return make_solution(p, x, resid);
}

namespace {

// scalar coefficient law for one spectral component of a decoupled block
struct ScalarCoeff {
  bool present = false;
  double weight = 0.0;  // diagonal weight for this component
  const CoeffBlock* block = nullptr;

  double at(double x, double y) const {
    double s = block->scale.empty()
                   ? 1.0
                   : block->scale.evaluate({{"x", block->coord_scale_x * x},
                                            {"y", block->coord_scale_y * y}});
    return block->out_scale * weight * s;
  }
};

ScalarCoeff component_coeff(const std::optional<CoeffBlock>& cb, int comp,
                            bool dense_op, const char* which) {
  ScalarCoeff sc;
  if (!cb) return sc;
  if (cb->entry_form())
    throw ValidationError(std::string("the reduced route cannot decouple an "
                                      "entry-law coefficient (") +
                          which + ")");
  switch (cb->base.kind()) {
    case OperatorSpec::Kind::Scalar:
      sc.weight = cb->base.scalar_value();
      break;
    case OperatorSpec::Kind::Diagonal:
      if (dense_op)
        throw ValidationError(
            std::string("the reduced route needs scalar coefficient bases "
                        "with a dense operator (") +
            which + ")");
      sc.weight = cb->base.diagonal_entries()[static_cast<std::size_t>(comp)];
      break;
    case OperatorSpec::Kind::Dense:
      throw ValidationError(
          std::string("the reduced route cannot decouple a dense coefficient "
                      "base (") +
          which + ")");
  }
  sc.present = true;
  sc.block = &*cb;
  return sc;
}

Assembled assemble_2d_component(const Problem2D& p, std::complex<double> am,
                                const ScalarCoeff& c1, const ScalarCoeff& c2,
                                const Eigen::VectorXcd& f,
                                std::complex<double> data_x,
                                std::complex<double> data_y) {
  const int nx = p.grids.gx.n, ny = p.grids.gy.n;
  const double hx = p.grids.gx.h, hy = p.grids.gy.h;
  auto idx = [ny](int ix, int iy) { return ix * ny + iy; };
  Assembled out;
  out.size = nx * ny;
  out.rhs = Eigen::VectorXcd::Zero(out.size);
  auto& trip = out.triplets;
  trip.reserve(static_cast<std::size_t>(out.size) * 8);

  const BcRow bx = bc_row(p.bcx, p.t1, p.alpha, p.p, hx);
  const BcRow by = bc_row(p.bcy, p.t2, p.beta, p.p, hy);
  const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);

  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      int r = idx(ix, iy);
      if (ix == nx - 1) {
        for (int k = 0; k < bx.count; ++k)
          trip.emplace_back(r, idx(ix + bx.off[k], iy), bx.c[k]);
        out.rhs[r] = data_x;
        continue;
      }
      if (ix == 0) {
        trip.emplace_back(r, r, 1.0);
        continue;
      }
      if (iy == ny - 1) {
        for (int k = 0; k < by.count; ++k)
          trip.emplace_back(r, idx(ix, iy + by.off[k]), by.c[k]);
        out.rhs[r] = data_y;
        continue;
      }
      if (iy == 0) {
        trip.emplace_back(r, r, 1.0);
        continue;
      }
      trip.emplace_back(r, idx(ix - 1, iy), -p.t1 * ihx2);
      trip.emplace_back(r, idx(ix + 1, iy), -p.t1 * ihx2);
      trip.emplace_back(r, idx(ix, iy - 1), -p.t2 * ihy2);
      trip.emplace_back(r, idx(ix, iy + 1), -p.t2 * ihy2);
      trip.emplace_back(r, idx(ix, iy),
                        2.0 * p.t1 * ihx2 + 2.0 * p.t2 * ihy2 + p.lambda + am);
      double x = p.grids.gx.x_nodes[ix], y = p.grids.gy.x_nodes[iy];
      if (c1.present) {
        double v = c1.at(x, y);
        if (v != 0.0) {
          trip.emplace_back(r, idx(ix + 1, iy), v / (2.0 * hx));
          trip.emplace_back(r, idx(ix - 1, iy), -v / (2.0 * hx));
        }
      }
      if (c2.present) {
        double v = c2.at(x, y);
        if (v != 0.0) {
          trip.emplace_back(r, idx(ix, iy + 1), v / (2.0 * hy));
          trip.emplace_back(r, idx(ix, iy - 1), -v / (2.0 * hy));
        }
      }
      out.rhs[r] = f[r];
    }
  }
  return out;
}

OperatorSpec scale_operator(const OperatorSpec& a, double s) {
  switch (a.kind()) {
    case OperatorSpec::Kind::Scalar:
      return OperatorSpec::scalar(s * a.scalar_value(), a.dim());
    case OperatorSpec::Kind::Diagonal: {
      std::vector<double> d = a.diagonal_entries();
      for (double& v : d) v *= s;
      return OperatorSpec::diagonal(std::move(d));
    }
    default:
      return OperatorSpec::dense(s * a.matrix());
  }
}

}  // namespace

Solution2D solve_2d_reduced(const Problem2D& p0) {
  Problem2D p = prepared(p0);
  const int de = p.op.dim();
  const int nodes = p.grids.nodes();
  const bool dense = p.op.kind() == OperatorSpec::Kind::Dense;

  Eigen::MatrixXcd v, vinv;
  Eigen::VectorXcd modes(de);
  if (dense) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(p.op.matrix());
    if (es.info() != Eigen::Success)
      throw SolveError("eigendecomposition failed in the reduced route");
    v = es.eigenvectors();
    modes = es.eigenvalues();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
    if (!lu.isInvertible())
      throw SolveError("operator is not safely diagonalizable");
    vinv = lu.inverse();
  } else {
    for (int m = 0; m < de; ++m)
      modes[m] = p.op.kind() == OperatorSpec::Kind::Scalar
                     ? p.op.scalar_value()
                     : p.op.diagonal_entries()[static_cast<std::size_t>(m)];
  }

  // transformed rhs and boundary data
  Eigen::MatrixXcd ft(nodes, de);
  for (int node = 0; node < nodes; ++node)
    for (int e = 0; e < de; ++e) ft(node, e) = p.rhs.at(node, e);
  Eigen::VectorXcd dx = Eigen::VectorXcd::Zero(de),
                   dy = Eigen::VectorXcd::Zero(de);
  for (int e = 0; e < de; ++e) {
    if (!p.bcx.data.empty()) dx[e] = p.bcx.data[static_cast<std::size_t>(e)];
    if (!p.bcy.data.empty()) dy[e] = p.bcy.data[static_cast<std::size_t>(e)];
  }
  if (dense) {
    ft = ft * vinv.transpose();  // per node: f~ = Vinv f
    dx = vinv * dx;
    dy = vinv * dy;
  }

  Eigen::MatrixXcd ut(nodes, de);
  for (int m = 0; m < de; ++m) {
    ScalarCoeff c1 = component_coeff(p.a1, m, dense, "a1");
    ScalarCoeff c2 = component_coeff(p.a2, m, dense, "a2");
    Assembled sys =
        assemble_2d_component(p, modes[m], c1, c2, ft.col(m), dx[m], dy[m]);
    SparseComplexLU lu(sys.size, sys.triplets);
    ut.col(m) = lu.solve(sys.rhs);
  }

  Eigen::VectorXcd x(nodes * de);
  for (int node = 0; node < nodes; ++node)
    for (int e = 0; e < de; ++e) {
      std::complex<double> val = 0.0;
      if (dense)
        for (int m = 0; m < de; ++m) val += v(e, m) * ut(node, m);
      else
        val = ut(node, e);
      x[static_cast<std::size_t>(node) * de + e] = val;
    }

  // residual against the original coupled system
  Assembled full = assemble_2d(p);
  double resid = relative_residual(full, x);
  if (!(resid <= 1e-10))
    throw SolveError("reduced-route residual " + std::to_string(resid) +
                     " above tolerance 1e-10");
  return make_solution(p, x, resid);
}

Solution2D solve_moving(const Problem2D& p0) {
  if (!p0.moving) throw ValidationError("problem has no moving-domain data");
  if (p0.rhs_law.empty())
    throw ValidationError("the moving-domain route needs an rhs law");
  Problem2D p = prepared(p0);
  const MovingDomain& mv = *p.moving;
  double as = mv.a_of_s.evaluate({{"t", mv.s}});
  double bs = mv.b_of_s.evaluate({{"t", mv.s}});
  if (!(as > 0.0) || !(bs > 0.0))
    throw ValidationError("moving endpoints must stay positive");
  if (std::abs(p.grids.gx.map.basepoint() - as) > 1e-9 * as ||
      std::abs(p.grids.gy.map.basepoint() - bs) > 1e-9 * bs)
    throw ValidationError("grids do not match the moving endpoints at s");

  // pull back to the unit reference domain
  Problem2D unit = p;
  unit.moving.reset();
  double fx = std::pow(as, p.alpha - 1.0);  // d(unit coord)/d(G_s coord)
  double fy = std::pow(bs, p.beta - 1.0);
  unit.t1 = p.t1 * std::pow(as, 2.0 * (p.alpha - 1.0));
  unit.t2 = p.t2 * std::pow(bs, 2.0 * (p.beta - 1.0));
  // a domain larger than the reference square pushes t past 1; rescaling
  // the interior rows keeps the parameters in range without changing u
  double rowscale = 1.0 / std::max({unit.t1, unit.t2, 1.0});
  if (rowscale < 1.0) {
    unit.t1 *= rowscale;
    unit.t2 *= rowscale;
    unit.lambda *= rowscale;
    unit.op = scale_operator(p.op, rowscale);
  }
  for (int i = 1; i <= unit.bcx.order; ++i)
    unit.bcx.delta[static_cast<std::size_t>(i)] *= std::pow(fx, i);
  for (int i = 1; i <= unit.bcy.order; ++i)
    unit.bcy.delta[static_cast<std::size_t>(i)] *= std::pow(fy, i);
  unit.grids = build_grid2(TransformMap(p.alpha, 1.0), p.grids.gx.n,
                           fx * p.grids.gx.depth(),
                           TransformMap(p.beta, 1.0), p.grids.gy.n,
                           fy * p.grids.gy.depth());
  const dsl::Expression& law = p.rhs_law;
  unit.rhs = field_from_xy(
      unit.grids, p.op.dim(), [&](double x, double y, int e) {
        return rowscale * law.evaluate({{"x", as * x},
                                        {"y", bs * y},
                                        {"m", double(e + 1)}});
      });
  if (unit.a1) {
    unit.a1->coord_scale_x *= as;
    unit.a1->coord_scale_y *= bs;
    unit.a1->out_scale *= fx * rowscale;
  }
  if (unit.a2) {
    unit.a2->coord_scale_x *= as;
    unit.a2->coord_scale_y *= bs;
    unit.a2->out_scale *= fy * rowscale;
  }

  Solution2D us = solve_2d_direct(unit);

  // push the nodal values forward to the G_s grids and rebuild the
  // derived fields there
  Solution2D out = make_solution(
      p, Eigen::Map<const Eigen::VectorXcd>(us.u.values.data(),
                                            static_cast<int>(us.u.values.size())),
      us.residual);
  return out;
}

double lower_order_bound(const Problem2D& p) {
  if (!p.a1 && !p.a2) return 0.0;
  OperatorSpec apow = p.op.fractional_power(-(0.5 - p.mu));
  Eigen::MatrixXd w = apow.matrix();
  double sup = 0.0;
  auto scan = [&](const CoeffBlock& cb) {
    if (!cb.xy_dependent()) {
      sup = std::max(
          sup, inf_norm(cb.value_at(p.grids.gx.x_nodes[0],
                                    p.grids.gy.x_nodes[0]) *
                        w));
      return;
    }
    for (int ix = 1; ix + 1 < p.grids.gx.n; ++ix)
      for (int iy = 1; iy + 1 < p.grids.gy.n; ++iy)
        sup = std::max(sup, inf_norm(cb.value_at(p.grids.gx.x_nodes[ix],
                                                 p.grids.gy.x_nodes[iy]) *
                                     w));
  };
  if (p.a1) scan(*p.a1);
  if (p.a2) scan(*p.a2);
  return sup;
}

}  // namespace degen
