#pragma once

#include <vector>

#include "degen/nonlinear.hpp"
#include "degen/sysinf.hpp"
#include "degen/verify.hpp"

// Frozen reference problems for the verification suite, plus the measured
// regression brackets that pin their behaviour.
namespace degen::ref {

// -u^{[2]} + (1 + lambda) u = f manufactured from u = exp(s), s the
// transformed coordinate; grading 1.3, p = 4, lambda = 1.
Problem1D manufactured_1d(int n);
// relative weighted-L_p error of a solve against the manufactured solution
double manufactured_error(const Solution1D& s);

// the same manufactured problem posed in plain form (graded second-order
// coefficient plus drift) and in regularized form
Problem1D plain_form(int n);
Problem1D regularized_form(int n);

// separable two-component 2D problem with a dense diagonalizable operator,
// a scalar lower-order x-coefficient, and smooth decaying forcing
Problem2D separable_2d(int n);

// sweep bases (lambda is overridden per sample)
Problem1D sweep_base_1d(int n);
Problem2D sweep_base_2d(int n);
SectorSpec sweep_sector();  // moduli 10^0..10^6, args {0, ±pi/6, ±pi/3}

// parameter sweep fixture: parametric form, diagonal operator, first-order
// boundary functional with nonzero scaled data
Problem1D tsweep_base(int n);
std::vector<double> tsweep_values();  // {1, 1e-1, ..., 1e-4}

Problem1D semigroup_base(int n);
SectorSpec semigroup_sector();

// moving-domain fixtures: endpoints a(s) = b(s) = scale, s = 0.5
Problem2D moving_problem(double scale, int n);
Problem2D direct_scaled(double scale, int n);  // same problem, no pullback

// nonlinear toy: -u^{[2]}_x - u^{[2]}_y + (1 + lambda + eps u^2) u = F(x,y)
// manufactured from u = exp(s_x + s_y); converges for small eps
NonlinearSpec nonlinear_toy(double eps, int n);
NonlinearSpec nonlinear_linear_force(int n);  // F = 2u, for the probe

// coupled system reference: d = m^2, a = b = 0.1 * 2^-|m-j|, lambda = 1e3,
// forcing on the leading four components
SystemSpec system_reference(int n_comp, int nper);
SystemSpec decay_fixture();    // a = 2^-|m-j|, d = m^2, mu = 0.25
SystemSpec decay_divergent();  // a = 1, d = 1
SystemSpec decoupled_pair();   // zero coupling, d = {1, 4}

// Measured regression brackets.  Calibrated once against the suite above,
// then frozen; a drift outside the bracket is a behaviour change.
inline constexpr double kSweep1dMaxRatioLo = 1.85;
inline constexpr double kSweep1dMaxRatioHi = 2.0;
inline constexpr double kSweep2dMaxRatioLo = 0.88;
inline constexpr double kSweep2dMaxRatioHi = 0.96;
inline constexpr double kTsweepSpreadLimit = 10.0;
inline constexpr double kInterpAgreementLimit = 3.0;
inline constexpr double kSemigroupSpreadLimit = 2.0;
inline constexpr double kSystemRatioLo = 1.4;
inline constexpr double kSystemRatioHi = 1.8;
inline constexpr double kDivergentEps = 50.0;

}  // namespace degen::ref
