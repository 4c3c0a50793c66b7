#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "degen/solve1d.hpp"
#include "degen/solve2d.hpp"

namespace degen {

// One solve, reduced to the uniform-estimate quotient
//   sum_i |lambda|^{1-i/2} w_i ||u^{[i]}|| + ||A u||  vs  ||f|| + data terms.
// Two parameter-weight conventions are tracked: w_i = t^{i/2} (the form the
// one-dimensional estimate is proved in) and w_i = t^i (the form the
// two-dimensional estimate is stated in).  `ratio` uses t^{i/2} for 1D
// problems and t^i for 2D ones; `ratio_alt` is the other convention.  They
// coincide at t = 1.
struct CoercivityReport {
  std::complex<double> lambda;
  double t1 = 1.0, t2 = 1.0;
  int dims = 1;
  double u_norm = 0.0, au_norm = 0.0, f_norm = 0.0;
  std::array<double, 3> ux_norms{};  // ||u^{[i]}_x||, i = 0, 1, 2
  std::array<double, 3> uy_norms{};  // 2D only
  double f1x_interp = 0.0, f1x_lambda = 0.0;  // boundary-data terms, x end
  double f1y_interp = 0.0, f1y_lambda = 0.0;
  double numerator = 0.0, numerator_alt = 0.0, denominator = 0.0;
  double ratio = 0.0, ratio_alt = 0.0;
  double residual = 0.0;
  double lower_order_value = 0.0;
  bool warning = false;
  std::string note;
};

CoercivityReport coercivity_report(const Problem1D& p, const Solution1D& s);
CoercivityReport coercivity_report(const Problem2D& p, const Solution2D& s);

struct SweepSummary {
  double max_ratio = 0.0, min_ratio = 0.0, median_ratio = 0.0;
  std::complex<double> argmax_lambda;
  double argmax_t1 = 1.0, argmax_t2 = 1.0;
  double trend_slope = 0.0;  // d(ratio)/d(log10 |lambda|) on |lambda| >= 1e3
  bool growth_flag = false;
  int failures = 0;  // per-point solve failures (recorded in the rows)
};

struct SweepResult {
  std::vector<CoercivityReport> reports;
  SweepSummary summary;
};

// Slope threshold and dispersion factor behind `growth_flag`.
inline constexpr double kTrendSlopeLimit = 0.02;
inline constexpr double kDispersionLimit = 10.0;

SweepResult sweep_lambda(const Problem1D& base, const SectorSpec& sector,
                         int threads = 1);
SweepResult sweep_lambda(const Problem2D& base, const SectorSpec& sector,
                         int threads = 1);
SweepResult sweep_t(const Problem1D& base, std::span<const double> t_values,
                    int threads = 1);
SweepResult sweep_t(const Problem2D& base,
                    std::span<const std::pair<double, double>> t_values,
                    int threads = 1);

// Mesh-stability probe for the solution operator: the weighted-l2 operator
// norm of f |-> u (interior data, homogeneous boundary rows), scaled by
// (1 + |lambda|), across mesh levels.  Maxima across levels should stay
// within a modest factor if the resolvent bound is mesh-robust.
struct SemigroupLevel {
  int n = 0;
  std::vector<std::pair<std::complex<double>, double>> values;
  double max_value = 0.0;
};

struct SemigroupTable {
  std::vector<SemigroupLevel> levels;
  double level_spread = 0.0;  // max over levels / min over levels
};

SemigroupTable semigroup_probe(const Problem1D& base, const SectorSpec& sector,
                               std::span<const int> mesh_levels,
                               unsigned seed = 20240901u);

}  // namespace degen
