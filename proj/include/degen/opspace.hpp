#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "degen/errors.hpp"

namespace degen {

// The operator A acting on the component space: a positive scalar, a
// positive diagonal, or a dense matrix with positive-real spectrum.
class OperatorSpec {
 public:
  enum class Kind { Scalar, Diagonal, Dense };

  OperatorSpec() : OperatorSpec(Scalar_{1.0}, 1) {}
  static OperatorSpec scalar(double c, int dim = 1);
  static OperatorSpec diagonal(std::vector<double> d);
  static OperatorSpec dense(Eigen::MatrixXd m);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double scalar_value() const;
  const std::vector<double>& diagonal_entries() const;
  Eigen::MatrixXd matrix() const;  // dense view of any variant
  double entry(int i, int j) const;

  void apply(std::span<const double> x, std::span<double> y) const;
  void apply(std::span<const std::complex<double>> x,
             std::span<std::complex<double>> y) const;

  // A^s through the spectrum; dense variants must be diagonalizable with
  // positive real eigenvalues.
  OperatorSpec fractional_power(double s) const;

  // Least real part over the spectrum (= least entry for scalar/diagonal).
  double min_real_eig() const;

  // Spectrum check used before coercivity claims on dense variants.
  bool spectrum_positive(double imag_tol = 1e-9) const;

 private:
  struct Scalar_ {
    double c;
  };
  OperatorSpec(Scalar_ s, int dim);
  explicit OperatorSpec(std::vector<double> d);
  explicit OperatorSpec(Eigen::MatrixXd m);

  Kind kind_;
  int dim_;
  double c_ = 1.0;
  std::vector<double> d_;
  Eigen::MatrixXd m_;
};

// Sample set for a sector |arg z| <= phi.
struct SectorSpec {
  double phi = 0.0;
  std::vector<double> moduli;
  std::vector<double> args;

  void validate() const;
  // modulus-major order
  std::vector<std::complex<double>> samples() const;
};

// Operator q-norm of the resolvent (A + lambda)^{-1}.  Exact for scalar and
// diagonal variants and for q = 2 (singular values); other q on dense
// variants use a Boyd-type power iteration (a sharp lower bound).
double resolvent_qnorm(const OperatorSpec& a, std::complex<double> lambda,
                       double q, unsigned seed = 7u);

struct PositivitySample {
  std::complex<double> lambda;
  double resolvent_norm;
  double value;  // (1 + |lambda|) * resolvent_norm
};

struct PositivityReport {
  double m_hat = 0.0;  // max of value over the samples
  std::vector<PositivitySample> rows;
};

// Uniform-boundedness probe for (1+|lambda|) ||(A+lambda)^{-1}|| over the
// sector samples.  Throws SolveError naming the sample if A + lambda is
// singular (spectrum reaching into the sector).
PositivityReport positivity_probe(const OperatorSpec& a,
                                  const SectorSpec& sector, double q,
                                  unsigned seed = 7u);

// Trace exponent for the i-th graded derivative at the solid end:
// i/2 + 1/(2 (1-exponent) p).  Negative values are legal as weights.
double sigma_trace(int i, double exponent, double p);

// Interpolation index attached to a second-order problem with grading
// `exponent`: (1/2) (1 + 1/((1-exponent) p)).
double theta_from_exponent(double exponent, double p);

enum class InterpMethod { Closed, KFunctional };

// Norm of the real interpolation space between D(A) and E with parameters
// (theta, q), for diagonal A (dense variants are reduced through the
// eigenbasis).  Closed: (sum (d_m^{1-theta} |u_m|)^q)^{1/q}.  KFunctional:
// log-grid quadrature of the scalar K-functionals |u_m| min(d_m, t) combined
// in l_q; the two differ by the exact factor (1/((1-theta)q) + 1/(theta q))^{1/q}.
double interp_norm(std::span<const double> u, const OperatorSpec& d,
                   double theta, double q, InterpMethod method);
double interp_norm(std::span<const std::complex<double>> u,
                   const OperatorSpec& d, double theta, double q,
                   InterpMethod method);

}  // namespace degen
