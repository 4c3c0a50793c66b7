#include "degen/nonlinear.hpp"

#include <cmath>
#include <random>

namespace degen {

StateLaw law_from_expression(const dsl::Expression& e) {
  for (const auto& v : e.variables())
    if (v != "x" && v != "y" && v != "m" && v != "u" && v != "ux" && v != "uy")
      throw ValidationError("state laws may only use x, y, m, u, ux, uy; found '" +
                            v + "'");
  return [e](const StateArgs& s) {
    return e.evaluate({{"x", s.x},
                       {"y", s.y},
                       {"m", double(s.m)},
                       {"u", s.u},
                       {"ux", s.ux},
                       {"uy", s.uy}});
  };
}

double y_norm(const Problem2D& p, const ComplexField& v) {
  ComplexField vx2 = reg_derivative2(v, p.grids, p.alpha, 2, 0);
  ComplexField vy2 = reg_derivative2(v, p.grids, p.beta, 2, 1);
  ComplexField av;
  av.dim_e = v.dim_e;
  av.values.resize(v.values.size());
  for (int node = 0; node < p.grids.nodes(); ++node) {
    std::span<const std::complex<double>> in(
        v.values.data() + static_cast<std::size_t>(node) * v.dim_e,
        static_cast<std::size_t>(v.dim_e));
    std::span<std::complex<double>> out(
        av.values.data() + static_cast<std::size_t>(node) * v.dim_e,
        static_cast<std::size_t>(v.dim_e));
    p.op.apply(in, out);
  }
  return weighted_lp_norm(vx2, p.grids, p.p, p.enorm) +
         weighted_lp_norm(vy2, p.grids, p.p, p.enorm) +
         weighted_lp_norm(av, p.grids, p.p, p.enorm) +
         weighted_lp_norm(v, p.grids, p.p, p.enorm);
}

namespace {

struct StateFields {
  DiscreteField u, ux, uy;
};

DiscreteField real_part(const ComplexField& v) {
  DiscreteField out;
  out.dim_e = v.dim_e;
  out.values.resize(v.values.size());
  for (std::size_t i = 0; i < v.values.size(); ++i)
    out.values[i] = v.values[i].real();
  return out;
}

StateFields state_of(const Problem2D& p, const ComplexField& v) {
  StateFields s;
  s.u = real_part(v);
  s.ux = reg_derivative2(s.u, p.grids, p.alpha, 1, 0);
  s.uy = reg_derivative2(s.u, p.grids, p.beta, 1, 1);
  return s;
}

double state_magnitude(const StateFields& s) {
  double m = 0.0;
  for (double v : s.u.values) m = std::max(m, std::abs(v));
  for (double v : s.ux.values) m = std::max(m, std::abs(v));
  for (double v : s.uy.values) m = std::max(m, std::abs(v));
  return m;
}

// rhs of the frozen-operator step: boundary rows keep their data (already in
// sys0.rhs), interior rows get F(state) - g(state) u.
Eigen::VectorXcd step_rhs(const Problem2D& p, const Eigen::VectorXcd& rhs0,
                          const StateFields& st, const StateLaw& g,
                          const StateLaw& force) {
  const int nx = p.grids.gx.n, ny = p.grids.gy.n, de = p.op.dim();
  Eigen::VectorXcd rhs = rhs0;
  for (int ix = 1; ix + 1 < nx; ++ix)
    for (int iy = 1; iy + 1 < ny; ++iy) {
      int node = ix * ny + iy;
      for (int e = 0; e < de; ++e) {
        StateArgs a{p.grids.gx.x_nodes[ix], p.grids.gy.x_nodes[iy],
                    st.u.at(node, e), st.ux.at(node, e), st.uy.at(node, e),
                    e + 1};
        double val = force(a);
        if (g) val -= g(a) * a.u;
        rhs[static_cast<std::size_t>(node) * de + e] = val;
      }
    }
  return rhs;
}

ComplexField as_field(const Eigen::VectorXcd& x, int dim_e) {
  ComplexField f;
  f.dim_e = dim_e;
  f.values.assign(x.data(), x.data() + x.size());
  return f;
}

ComplexField diff_field(const ComplexField& a, const ComplexField& b) {
  ComplexField d;
  d.dim_e = a.dim_e;
  d.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d.values[i] = a.values[i] - b.values[i];
  return d;
}

Problem2D nonlinear_base(const NonlinearSpec& spec) {
  Problem2D base = spec.base;
  if (base.moving)
    throw ValidationError("contraction solves do not take moving domains");
  if (base.lambda.imag() != 0.0)
    throw ValidationError("contraction solves need real lambda");
  base.rhs.dim_e = base.op.dim();
  base.rhs.values.assign(
      static_cast<std::size_t>(base.grids.nodes()) * base.op.dim(), 0.0);
  base.validate();
  return base;
}

}  // namespace

PicardResult picard_solve(const NonlinearSpec& spec) {
  if (!spec.force) throw ValidationError("nonlinear force law is required");
  if (!(spec.tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (spec.max_iter < 1) throw ValidationError("max_iter must be >= 1");

  Problem2D base = nonlinear_base(spec);
  IterationTrace trace;

  for (;;) {  // one pass per domain attempt
    Assembled sys0 = assemble_2d(base);
    SparseComplexLU lu(sys0.size, sys0.triplets);
    const int de = base.op.dim();
    const int nodes = base.grids.nodes();

    // seed solve at zero state
    DiscreteField f0 = field_from_xy(base.grids, de, [&](double x, double y,
                                                         int e) {
      return spec.force(StateArgs{x, y, 0.0, 0.0, 0.0, e + 1});
    });
    trace.f0_norm = weighted_lp_norm(f0, base.grids, base.p, base.enorm);
    StateFields zero_state;
    zero_state.u.dim_e = zero_state.ux.dim_e = zero_state.uy.dim_e = de;
    zero_state.u.values.assign(static_cast<std::size_t>(nodes) * de, 0.0);
    zero_state.ux = zero_state.u;
    zero_state.uy = zero_state.u;
    Eigen::VectorXcd w =
        lu.solve(step_rhs(base, sys0.rhs, zero_state, spec.g, spec.force));
    ComplexField wf = as_field(w, de);
    trace.w_y_norm = y_norm(base, wf);
    trace.c0_observed =
        trace.f0_norm > 0.0 ? trace.w_y_norm / trace.f0_norm : 0.0;

    trace.records.clear();
    trace.converged = false;
    ComplexField u_prev = wf;
    Eigen::VectorXcd x_prev = w;
    double delta_prev = 0.0;
    int expanding = 0;
    bool diverged = false;

    for (int iter = 1; iter <= spec.max_iter; ++iter) {
      StateFields st = state_of(base, u_prev);
      Eigen::VectorXcd x_next =
          lu.solve(step_rhs(base, sys0.rhs, st, spec.g, spec.force));
      ComplexField u_next = as_field(x_next, de);

      IterationRecord rec;
      rec.iter = iter;
      rec.delta_y = y_norm(base, diff_field(u_next, u_prev));
      rec.ratio = (iter > 1 && delta_prev > 0.0) ? rec.delta_y / delta_prev
                                                 : 0.0;
      rec.in_ball = y_norm(base, diff_field(u_next, wf)) <= spec.ball_radius;
      rec.state_max = state_magnitude(st);
      trace.records.push_back(rec);
      trace.implied_radius = std::max(trace.implied_radius, rec.state_max);

      u_prev = u_next;
      x_prev = x_next;
      if (rec.delta_y <= spec.tol) {
        trace.converged = true;
        break;
      }
      expanding = rec.ratio > 1.0 ? expanding + 1 : 0;
      if (expanding >= 3) {
        diverged = true;
        break;
      }
      delta_prev = rec.delta_y;
    }

    if (diverged) {
      if (spec.shrink_retry && trace.shrink_count < spec.max_shrink) {
        ++trace.shrink_count;
        double ax = base.grids.gx.map.basepoint() / 2.0;
        double by = base.grids.gy.map.basepoint() / 2.0;
        base.grids = build_grid2(
            TransformMap(base.alpha, ax), base.grids.gx.n,
            std::pow(2.0, base.alpha - 1.0) * base.grids.gx.depth(),
            TransformMap(base.beta, by), base.grids.gy.n,
            std::pow(2.0, base.beta - 1.0) * base.grids.gy.depth());
        base.rhs.values.assign(
            static_cast<std::size_t>(base.grids.nodes()) * de, 0.0);
        continue;
      }
      throw DivergenceError(
          "contraction iteration diverged (three consecutive expanding "
          "steps) after " +
              std::to_string(trace.records.size()) + " iterations and " +
              std::to_string(trace.shrink_count) + " domain shrinks",
          trace);
    }

    // nonlinear residual by substitution into the frozen-operator form
    StateFields st = state_of(base, u_prev);
    Eigen::VectorXcd rhs = step_rhs(base, sys0.rhs, st, spec.g, spec.force);
    Eigen::VectorXcd mx = Eigen::VectorXcd::Zero(sys0.size);
    for (const auto& t : sys0.triplets) mx[t.row()] += t.value() * x_prev[t.col()];
    ComplexField resf = as_field(mx - rhs, de);
    trace.final_residual =
        weighted_lp_norm(resf, base.grids, base.p, base.enorm);

    PicardResult out{make_solution(base, x_prev, trace.final_residual), trace};
    return out;
  }
}

double lipschitz_probe(const NonlinearSpec& spec, int samples, unsigned seed,
                       double radius) {
  if (!spec.force) throw ValidationError("nonlinear force law is required");
  if (samples < 1) throw ValidationError("probe needs at least one sample");
  if (!(radius > 0.0)) throw ValidationError("probe radius must be positive");

  Problem2D base = nonlinear_base(spec);
  Assembled sys0 = assemble_2d(base);
  SparseComplexLU lu(sys0.size, sys0.triplets);
  const int de = base.op.dim();
  const int nodes = base.grids.nodes();
  StateFields zero_state;
  zero_state.u.dim_e = zero_state.ux.dim_e = zero_state.uy.dim_e = de;
  zero_state.u.values.assign(static_cast<std::size_t>(nodes) * de, 0.0);
  zero_state.ux = zero_state.u;
  zero_state.uy = zero_state.u;
  Eigen::VectorXcd w =
      lu.solve(step_rhs(base, sys0.rhs, zero_state, spec.g, spec.force));
  StateFields st = state_of(base, as_field(w, de));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  std::uniform_int_distribution<int> node_pick(0, nodes - 1);
  std::uniform_int_distribution<int> comp_pick(0, de - 1);
  const int ny = base.grids.gy.n;

  double mu_hat = 0.0;
  for (int s = 0; s < samples; ++s) {
    int node = node_pick(rng);
    int e = comp_pick(rng);
    int ix = node / ny, iy = node % ny;
    StateArgs b{base.grids.gx.x_nodes[ix], base.grids.gy.x_nodes[iy],
                st.u.at(node, e), st.ux.at(node, e), st.uy.at(node, e), e + 1};
    StateArgs a1 = b, a2 = b;
    switch (s % 4) {
      case 0:
        a1.u += unif(rng);
        a2.u += unif(rng);
        break;
      case 1:
        a1.ux += unif(rng);
        a2.ux += unif(rng);
        break;
      case 2:
        a1.uy += unif(rng);
        a2.uy += unif(rng);
        break;
      default:
        a1.u += unif(rng);
        a2.u += unif(rng);
        a1.ux += unif(rng);
        a2.ux += unif(rng);
        a1.uy += unif(rng);
        a2.uy += unif(rng);
        break;
    }
    double du = a1.u - a2.u, dux = a1.ux - a2.ux, duy = a1.uy - a2.uy;
    double dd = std::sqrt(du * du + dux * dux + duy * duy);
    if (dd < 1e-14) continue;
    double q = std::abs(spec.force(a1) - spec.force(a2)) / dd;
    mu_hat = std::max(mu_hat, q);
  }
  return mu_hat;
}

BallReport ball_check(const IterationTrace& trace, double radius,
                      double mu_hat) {
  BallReport r;
  r.radius = radius;
  r.mu_hat = mu_hat;
  r.c0 = trace.c0_observed;
  r.contraction_bound = r.c0 * mu_hat;
  r.contraction_ok = r.contraction_bound < 1.0;
  r.stayed_in_ball = !trace.records.empty();
  for (const auto& rec : trace.records)
    if (!rec.in_ball) r.stayed_in_ball = false;
  r.implied_radius = trace.implied_radius;
  r.suggested_radius =
      r.contraction_ok
          ? r.c0 * trace.f0_norm / (1.0 - r.contraction_bound)
          : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace degen
