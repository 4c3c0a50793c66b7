#pragma once

#include <span>
#include <vector>

#include "degen/solve2d.hpp"
#include "degen/verify.hpp"

namespace degen {

// Family of truncations of an infinite coupled system: diagonal part d_m
// from a law in m, lower-order couplings a_{mj}(x,y) u^{[1]}_x and
// b_{mj}(x,y) u^{[1]}_y, data combined componentwise in l_q.
struct SystemSpec {
  dsl::Expression d_law;         // in m; positive, nondecreasing
  dsl::Expression a_law, b_law;  // in (m, j, x, y); empty = no coupling
  double mu = 0.25;
  int n_comp = 8;  // truncation size
  double q = 2.0;
  Problem2D base;           // geometry, bcs, lambda, t; op/rhs are replaced
  dsl::Expression rhs_law;  // in (m, x, y)
  int rhs_support = 0;      // 0 = all components, else f_m = 0 for m > this

  std::vector<double> diagonal(int n) const;  // d_1..d_n, validated
  Problem2D instantiate(int n) const;
  void validate() const;
};

struct DecayRow {
  int n = 0;
  double sup_a = 0.0, sup_b = 0.0;
};

// Partial sums of the coefficient-boundedness condition
//   sup_m sum_j |c_mj(x,y)| d_j^{-(1/2-mu)}
// over grid points, tabulated against the truncation size.
struct DecayReport {
  double sup_a = 0.0, sup_b = 0.0;  // at the largest size tabulated
  bool finite = false;              // last doubling step grew by <= 1%
  std::vector<DecayRow> growth_vs_n;
};

DecayReport decay_condition_check(const SystemSpec& spec,
                                  std::span<const int> n_list);

struct SystemSolution {
  Solution2D solution;      // dim_e = n_comp
  CoercivityReport report;  // plain l_q components; the ||A u|| term is the
                            // d-weighted norm ||D u||
  DecayReport decay;        // informational, over {N, 2N}
};

SystemSolution truncate_and_solve(const SystemSpec& spec);

struct TruncationRow {
  int n = 0;
  double diff = 0.0;           // ||u^(N) - P_N u^(ref)|| in L_p(G; l_q)
  double diff_weighted = 0.0;  // same difference in L_p(G; l_q(D))
  double residual = 0.0;
};

struct TruncationStudy {
  std::vector<TruncationRow> rows;
  int n_ref = 0;             // 2 * max(n_list)
  bool decay_finite = false; // propagated flag, informational
};

// Self-convergence of the truncations against the doubled reference.  The
// forcing must sit on a fixed leading block (rhs_support in [1, min N]) so
// the tail components are driven by the coupling alone.
TruncationStudy truncation_study(const SystemSpec& spec,
                                 std::span<const int> n_list);

}  // namespace degen
