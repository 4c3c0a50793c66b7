#include "degen/sysinf.hpp"

#include <cmath>

namespace degen {

std::vector<double> SystemSpec::diagonal(int n) const {
  if (d_law.empty()) throw ValidationError("system diagonal law is required");
  std::vector<double> d(n);
  for (int m = 1; m <= n; ++m) {
    d[m - 1] = d_law.evaluate({{"m", double(m)}});
    if (!(d[m - 1] > 0.0))
      throw ValidationError("diagonal law nonpositive at m = " +
                            std::to_string(m));
    if (m > 1 && d[m - 1] < d[m - 2])
      throw ValidationError("diagonal law decreases at m = " +
                            std::to_string(m));
  }
  return d;
}

void SystemSpec::validate() const {
  if (n_comp < 1) throw ValidationError("truncation size must be >= 1");
  if (!(mu > 0.0) || !(mu < 0.5))
    throw ValidationError("mu must lie in (0, 1/2)");
  if (!(q > 1.0)) throw ValidationError("component index q must exceed 1");
  if (base.moving)
    throw ValidationError("system truncations do not take moving domains");
  for (const auto& v : d_law.variables())
    if (v != "m")
      throw ValidationError("diagonal law may only use m; found '" + v + "'");
  if (rhs_law.empty()) throw ValidationError("system rhs law is required");
  for (const auto& v : rhs_law.variables())
    if (v != "x" && v != "y" && v != "m")
      throw ValidationError("system rhs law may only use x, y, m; found '" +
                            v + "'");
  diagonal(n_comp);
}

Problem2D SystemSpec::instantiate(int n) const {
  Problem2D p = base;
  std::vector<double> d = diagonal(n);
  p.op = OperatorSpec::diagonal(d);
  p.enorm = ComponentNorm{q, {}};
  p.mu = mu;
  p.a1.reset();
  p.a2.reset();
  if (!a_law.empty()) {
    CoeffBlock cb;
    cb.entry_law = a_law;
    cb.dim = n;
    p.a1 = cb;
  }
  if (!b_law.empty()) {
    CoeffBlock cb;
    cb.entry_law = b_law;
    cb.dim = n;
    p.a2 = cb;
  }
  p.rhs_law = dsl::Expression{};
  p.rhs = field_from_xy(p.grids, n, [&](double x, double y, int e) {
    if (rhs_support > 0 && e + 1 > rhs_support) return 0.0;
    return rhs_law.evaluate({{"x", x}, {"y", y}, {"m", double(e + 1)}});
  });
  p.validate();
  return p;
}

namespace {

// sup over m <= n and grid points of sum_{j<=n} |law(m,j,x,y)| dpow_j
double coupling_sup(const dsl::Expression& law, std::span<const double> dpow,
                    int n, const Grid2D& grids) {
  if (law.empty()) return 0.0;
  std::vector<std::pair<double, double>> pts;
  if (law.depends_on("x") || law.depends_on("y")) {
    pts.reserve(static_cast<std::size_t>(grids.nodes()));
    for (double x : grids.gx.x_nodes)
      for (double y : grids.gy.x_nodes) pts.emplace_back(x, y);
  } else {
    pts.emplace_back(grids.gx.x_nodes.front(), grids.gy.x_nodes.front());
  }
  double sup = 0.0;
  dsl::Bindings env;
  for (const auto& [x, y] : pts) {
    env["x"] = x;
    env["y"] = y;
    for (int m = 1; m <= n; ++m) {
      env["m"] = m;
      double s = 0.0;
      for (int j = 1; j <= n; ++j) {
        env["j"] = j;
        s += std::abs(law.evaluate(env)) * dpow[j - 1];
      }
      sup = std::max(sup, s);
    }
  }
  return sup;
}

}  // namespace

DecayReport decay_condition_check(const SystemSpec& spec,
                                  std::span<const int> n_list) {
  if (n_list.empty()) throw ValidationError("decay check needs sizes");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i + 1] <= n_list[i])
      throw ValidationError("decay check sizes must increase");
  if (n_list.front() < 1)
    throw ValidationError("decay check sizes must be positive");

  const int n_max = n_list.back();
  std::vector<double> d = spec.diagonal(n_max);
  std::vector<double> dpow(d.size());
  for (std::size_t j = 0; j < d.size(); ++j)
    dpow[j] = std::pow(d[j], -(0.5 - spec.mu));

  DecayReport rep;
  for (int n : n_list) {
    DecayRow row;
    row.n = n;
    row.sup_a = coupling_sup(spec.a_law, dpow, n, spec.base.grids);
    row.sup_b = coupling_sup(spec.b_law, dpow, n, spec.base.grids);
    rep.growth_vs_n.push_back(row);
  }
  rep.sup_a = rep.growth_vs_n.back().sup_a;
  rep.sup_b = rep.growth_vs_n.back().sup_b;

  if (rep.growth_vs_n.size() < 2) {
    rep.finite = rep.sup_a == 0.0 && rep.sup_b == 0.0;
    return rep;
  }
  // prefer the last exact-doubling step; fall back to the last step
  std::size_t lo = rep.growth_vs_n.size() - 2;
  for (std::size_t i = rep.growth_vs_n.size() - 1; i-- > 0;)
    if (rep.growth_vs_n[i + 1].n == 2 * rep.growth_vs_n[i].n) {
      lo = i;
      break;
    }
  const DecayRow& r1 = rep.growth_vs_n[lo];
  const DecayRow& r2 = rep.growth_vs_n[lo + 1];
  rep.finite = (r2.sup_a - r1.sup_a) <= 0.01 * r1.sup_a &&
               (r2.sup_b - r1.sup_b) <= 0.01 * r1.sup_b;
  return rep;
}

SystemSolution truncate_and_solve(const SystemSpec& spec) {
  spec.validate();
  SystemSolution out;
  const std::vector<int> ns{spec.n_comp, 2 * spec.n_comp};
  out.decay = decay_condition_check(spec, ns);
  Problem2D p = spec.instantiate(spec.n_comp);
  out.solution = solve_2d_direct(p);
  out.report = coercivity_report(p, out.solution);
  return out;
}

TruncationStudy truncation_study(const SystemSpec& spec,
                                 std::span<const int> n_list) {
  spec.validate();
  if (n_list.empty()) throw ValidationError("truncation study needs sizes");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i + 1] <= n_list[i])
      throw ValidationError("truncation sizes must increase");
  if (spec.rhs_support < 1 || spec.rhs_support > n_list.front())
    throw ValidationError(
        "truncation study needs forcing on a fixed leading block "
        "(rhs_support in [1, min N])");

  TruncationStudy study;
  study.n_ref = 2 * n_list.back();

  std::vector<int> decay_ns(n_list.begin(), n_list.end());
  decay_ns.push_back(study.n_ref);
  study.decay_finite = decay_condition_check(spec, decay_ns).finite;

  Problem2D pref = spec.instantiate(study.n_ref);
  Solution2D ref = solve_2d_direct(pref);

  for (int n : n_list) {
    Problem2D p = spec.instantiate(n);
    Solution2D sol = solve_2d_direct(p);

    ComplexField diff;
    diff.dim_e = n;
    diff.values.resize(static_cast<std::size_t>(p.grids.nodes()) * n);
    for (int node = 0; node < p.grids.nodes(); ++node)
      for (int e = 0; e < n; ++e)
        diff.at(node, e) = sol.u.at(node, e) - ref.u.at(node, e);

    TruncationRow row;
    row.n = n;
    row.residual = sol.residual;
    row.diff = weighted_lp_norm(diff, p.grids, p.p, ComponentNorm{spec.q, {}});
    row.diff_weighted = weighted_lp_norm(
        diff, p.grids, p.p, ComponentNorm{spec.q, spec.diagonal(n)});
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace degen
