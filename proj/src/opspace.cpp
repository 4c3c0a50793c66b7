#include "degen/opspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace degen {
namespace {

std::string cplx_str(std::complex<double> z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
         ")";
}

}  // namespace

OperatorSpec::OperatorSpec(Scalar_ s, int dim)
    : kind_(Kind::Scalar), dim_(dim), c_(s.c) {
  if (dim < 1) throw ValidationError("operator dimension must be >= 1");
  if (!(c_ > 0.0) || !std::isfinite(c_))
    throw ValidationError("scalar operator value must be positive");
}

OperatorSpec::OperatorSpec(std::vector<double> d)
    : kind_(Kind::Diagonal), dim_(static_cast<int>(d.size())), d_(std::move(d)) {
  if (d_.empty()) throw ValidationError("diagonal operator must be non-empty");
  for (double v : d_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("diagonal operator entries must be positive");
}

OperatorSpec::OperatorSpec(Eigen::MatrixXd m)
    : kind_(Kind::Dense), dim_(static_cast<int>(m.rows())), m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw ValidationError("dense operator must be square and non-empty");
  if (!m_.allFinite())
    throw ValidationError("dense operator entries must be finite");
}

OperatorSpec OperatorSpec::scalar(double c, int dim) {
  return OperatorSpec(Scalar_{c}, dim);
}
OperatorSpec OperatorSpec::diagonal(std::vector<double> d) {
  return OperatorSpec(std::move(d));
}
OperatorSpec OperatorSpec::dense(Eigen::MatrixXd m) {
  return OperatorSpec(std::move(m));
}

double OperatorSpec::scalar_value() const {
  if (kind_ != Kind::Scalar) throw ValidationError("operator is not scalar");
  return c_;
}

const std::vector<double>& OperatorSpec::diagonal_entries() const {
  if (kind_ != Kind::Diagonal)
    throw ValidationError("operator is not diagonal");
  return d_;
}

Eigen::MatrixXd OperatorSpec::matrix() const {
  switch (kind_) {
    case Kind::Scalar:
      return c_ * Eigen::MatrixXd::Identity(dim_, dim_);
    case Kind::Diagonal: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
      for (int i = 0; i < dim_; ++i) m(i, i) = d_[i];
      return m;
    }
    case Kind::Dense:
      return m_;
  }
  throw ValidationError("corrupt operator");
}

double OperatorSpec::entry(int i, int j) const {
  switch (kind_) {
    case Kind::Scalar:
      return i == j ? c_ : 0.0;
    case Kind::Diagonal:
      return i == j ? d_[static_cast<std::size_t>(i)] : 0.0;
    case Kind::Dense:
      return m_(i, j);
  }
  throw ValidationError("corrupt operator");
}

void OperatorSpec::apply(std::span<const double> x,
                         std::span<double> y) const {
  if (static_cast<int>(x.size()) != dim_ || x.size() != y.size())
    throw ValidationError("operator apply: size mismatch");
  switch (kind_) {
    case Kind::Scalar:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = c_ * x[i];
      return;
    case Kind::Diagonal:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = d_[i] * x[i];
      return;
    case Kind::Dense: {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), dim_);
      Eigen::Map<Eigen::VectorXd> yv(y.data(), dim_);
      yv = m_ * xv;
      return;
    }
  }
}

void OperatorSpec::apply(std::span<const std::complex<double>> x,
                         std::span<std::complex<double>> y) const {
  if (static_cast<int>(x.size()) != dim_ || x.size() != y.size())
    throw ValidationError("operator apply: size mismatch");
  switch (kind_) {
    case Kind::Scalar:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = c_ * x[i];
      return;
    case Kind::Diagonal:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = d_[i] * x[i];
      return;
    case Kind::Dense: {
      Eigen::Map<const Eigen::VectorXcd> xv(x.data(), dim_);
      Eigen::Map<Eigen::VectorXcd> yv(y.data(), dim_);
      yv = m_.cast<std::complex<double>>() * xv;
      return;
    }
  }
}

OperatorSpec OperatorSpec::fractional_power(double s) const {
  switch (kind_) {
    case Kind::Scalar:
      return scalar(std::pow(c_, s), dim_);
    case Kind::Diagonal: {
      std::vector<double> d(d_);
      for (double& v : d) v = std::pow(v, s);
      return diagonal(std::move(d));
    }
    case Kind::Dense: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(m_);
      if (es.info() != Eigen::Success)
        throw SolveError("eigendecomposition failed for fractional power");
      Eigen::VectorXcd ev = es.eigenvalues();
      double scale = ev.cwiseAbs().maxCoeff();
      for (int i = 0; i < ev.size(); ++i) {
        if (!(ev[i].real() > 0.0) ||
            std::abs(ev[i].imag()) > 1e-9 * std::max(1.0, scale))
          throw ValidationError(
              "fractional power needs positive real spectrum; eigenvalue " +
              cplx_str(ev[i]));
      }
      Eigen::MatrixXcd v = es.eigenvectors();
      Eigen::VectorXcd powed(ev.size());
      for (int i = 0; i < ev.size(); ++i)
        powed[i] = std::pow(ev[i].real(), s);
      Eigen::MatrixXcd r = v * powed.asDiagonal() * v.inverse();
      double resid = r.imag().cwiseAbs().maxCoeff();
      if (resid > 1e-8 * std::max(1.0, r.real().cwiseAbs().maxCoeff()))
        throw SolveError("fractional power has a non-real residue " +
                         std::to_string(resid));
      return dense(r.real());
    }
  }
  throw ValidationError("corrupt operator");
}

double OperatorSpec::min_real_eig() const {
  switch (kind_) {
    case Kind::Scalar:
      return c_;
    case Kind::Diagonal:
      return *std::min_element(d_.begin(), d_.end());
    case Kind::Dense: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(m_, /*computeEigenvectors=*/false);
      if (es.info() != Eigen::Success)
        throw SolveError("eigendecomposition failed");
      return es.eigenvalues().real().minCoeff();
    }
  }
  throw ValidationError("corrupt operator");
}

bool OperatorSpec::spectrum_positive(double imag_tol) const {
  if (kind_ != Kind::Dense) return min_real_eig() > 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m_, false);
  if (es.info() != Eigen::Success)
    throw SolveError("eigendecomposition failed");
  Eigen::VectorXcd ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i)
    if (!(ev[i].real() > 0.0) || std::abs(ev[i].imag()) > imag_tol * scale)
      return false;
  return true;
}

void SectorSpec::validate() const {
  if (!(phi > 0.0) || !(phi < std::numbers::pi))
    throw ValidationError("sector half-angle must lie in (0, pi)");
  if (moduli.empty() || args.empty())
    throw ValidationError("sector sample sets must be non-empty");
  double prev = 0.0;
  for (double r : moduli) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw ValidationError("sector moduli must be positive");
    if (!(r > prev))
      throw ValidationError("sector moduli must be strictly increasing");
    prev = r;
  }
  for (double a : args)
    if (!(std::abs(a) <= phi + 1e-12))
      throw ValidationError("sector argument " + std::to_string(a) +
                            " exceeds the half-angle " + std::to_string(phi));
}

std::vector<std::complex<double>> SectorSpec::samples() const {
  validate();
  std::vector<std::complex<double>> out;
  out.reserve(moduli.size() * args.size());
  for (double r : moduli)
    for (double a : args)
      out.push_back(std::polar(r, a));
  return out;
}

namespace {

// ||R||_q for a dense complex matrix.  q = 2 by singular values; other q by
// the nonlinear power iteration of Boyd (a sharp lower bound), run from a
// deterministic start plus seeded restarts.
double dense_qnorm(const Eigen::MatrixXcd& r, double q, unsigned seed) {
  if (q == 2.0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
    return svd.singularValues()(0);
  }
  const double qq = q / (q - 1.0);  // conjugate index
  auto lq = [](const Eigen::VectorXcd& v, double idx) {
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), idx);
    return std::pow(s, 1.0 / idx);
  };
  auto dual_map = [](const Eigen::VectorXcd& v, double idx) {
    // duality map of l_idx: w_i = v_i |v_i|^{idx-2}
    Eigen::VectorXcd w(v.size());
    for (int i = 0; i < v.size(); ++i) {
      double a = std::abs(v[i]);
      w[i] = a > 0.0 ? v[i] * std::pow(a, idx - 2.0) : 0.0;
    }
    return w;
  };
  Eigen::MatrixXcd rh = r.adjoint();
  double best = 0.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int restart = 0; restart < 5; ++restart) {
    Eigen::VectorXcd x(r.cols());
    if (restart == 0)
      x.setOnes();
    else
      for (int i = 0; i < x.size(); ++i) x[i] = {unif(rng), unif(rng)};
    x /= lq(x, q);
    double est = 0.0;
    for (int it = 0; it < 60; ++it) {
      Eigen::VectorXcd y = r * x;
      double ny = lq(y, q);
      if (ny == 0.0) break;
      est = ny;
      Eigen::VectorXcd z = rh * dual_map(y / ny, q);
      double nz = lq(z, qq);
      if (nz == 0.0) break;
      x = dual_map(z / nz, qq);
      x /= lq(x, q);
    }
    best = std::max(best, est);
  }
  return best;
}

}  // namespace

double resolvent_qnorm(const OperatorSpec& a, std::complex<double> lambda,
                       double q, unsigned seed) {
  if (!(q > 1.0) || !std::isfinite(q))
    throw ValidationError("operator norm index q must lie in (1, inf)");
  switch (a.kind()) {
    case OperatorSpec::Kind::Scalar: {
      double den = std::abs(a.scalar_value() + lambda);
      if (den == 0.0)
        throw SolveError("resolvent singular at lambda = " + cplx_str(lambda));
      return 1.0 / den;
    }
    case OperatorSpec::Kind::Diagonal: {
      double best = 0.0;
      for (double d : a.diagonal_entries()) {
        double den = std::abs(d + lambda);
        if (den == 0.0)
          throw SolveError("resolvent singular at lambda = " +
                           cplx_str(lambda));
        best = std::max(best, 1.0 / den);
      }
      return best;
    }
    case OperatorSpec::Kind::Dense: {
      Eigen::MatrixXcd m = a.matrix().cast<std::complex<double>>();
      for (int i = 0; i < a.dim(); ++i) m(i, i) += lambda;
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
      if (!lu.isInvertible())
        throw SolveError("resolvent singular at lambda = " + cplx_str(lambda));
      Eigen::MatrixXcd r = lu.inverse();
      return dense_qnorm(r, q, seed);
    }
  }
  throw ValidationError("corrupt operator");
}

PositivityReport positivity_probe(const OperatorSpec& a,
                                  const SectorSpec& sector, double q,
                                  unsigned seed) {
  PositivityReport rep;
  for (std::complex<double> lambda : sector.samples()) {
    double rn = resolvent_qnorm(a, lambda, q, seed);
    double value = (1.0 + std::abs(lambda)) * rn;
    rep.rows.push_back({lambda, rn, value});
    rep.m_hat = std::max(rep.m_hat, value);
  }
  return rep;
}

double sigma_trace(int i, double exponent, double p) {
  if (i < 0) throw ValidationError("trace order must be >= 0");
  if (!(p > 1.0)) throw ValidationError("index p must exceed 1");
  if (exponent == 1.0)
    throw ValidationError("trace exponent undefined at grading 1");
  return i / 2.0 + 1.0 / (2.0 * (1.0 - exponent) * p);
}

double theta_from_exponent(double exponent, double p) {
  if (!(p > 1.0)) throw ValidationError("index p must exceed 1");
  if (exponent == 1.0)
    throw ValidationError("interpolation index undefined at grading 1");
  return 0.5 * (1.0 + 1.0 / ((1.0 - exponent) * p));
}

namespace {

std::vector<double> interp_weights(const OperatorSpec& d,
                                   Eigen::MatrixXcd* vinv_out) {
  switch (d.kind()) {
    case OperatorSpec::Kind::Scalar:
      return std::vector<double>(static_cast<std::size_t>(d.dim()),
                                 d.scalar_value());
    case OperatorSpec::Kind::Diagonal:
      return d.diagonal_entries();
    case OperatorSpec::Kind::Dense: {
      Eigen::EigenSolver<Eigen::MatrixXd> es(d.matrix());
      if (es.info() != Eigen::Success)
        throw SolveError("eigendecomposition failed");
      Eigen::VectorXcd ev = es.eigenvalues();
      double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
      std::vector<double> w(static_cast<std::size_t>(ev.size()));
      for (int i = 0; i < ev.size(); ++i) {
        if (!(ev[i].real() > 0.0) || std::abs(ev[i].imag()) > 1e-9 * scale)
          throw ValidationError(
              "interpolation norm needs positive real spectrum");
        w[static_cast<std::size_t>(i)] = ev[i].real();
      }
      if (vinv_out) *vinv_out = es.eigenvectors().inverse();
      return w;
    }
  }
  throw ValidationError("corrupt operator");
}

double interp_norm_impl(std::vector<double> mods, std::vector<double> w,
                        double theta, double q, InterpMethod method) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw ValidationError("interpolation parameter must lie in (0, 1)");
  if (!(q > 1.0) || !std::isfinite(q))
    throw ValidationError("interpolation index q must lie in (1, inf)");
  if (method == InterpMethod::Closed) {
    double s = 0.0;
    for (std::size_t i = 0; i < mods.size(); ++i)
      s += std::pow(std::pow(w[i], 1.0 - theta) * mods[i], q);
    return std::pow(s, 1.0 / q);
  }
  // Quadrature of t^{-theta} K(t) in l_q over the couple (l_q(D), l_q),
  // with the exact scalar K-functionals K_m(t) = |u_m| min(d_m, t)
  // combined componentwise.  For every single component the ratio to the
  // closed form is then (1/((1-theta)q) + 1/(theta q))^{1/q}, independent
  // of d_m.
  double lo = 1e300, hi = 0.0;
  for (double d : w) {
    if (!(d > 0.0))
      throw ValidationError("interpolation requires a positive spectrum");
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double t_lo = 1e-8 * lo, t_hi = 1e8 * hi;
  const int per_decade = 64;
  const double l0 = std::log(t_lo), l1 = std::log(t_hi);
  const int steps =
      std::max(16, static_cast<int>((l1 - l0) / std::log(10.0)) * per_decade);
  const double dl = (l1 - l0) / steps;
  auto integrand = [&](double logt) {
    double t = std::exp(logt);
    double s = 0.0;
    for (std::size_t i = 0; i < mods.size(); ++i)
      s += std::pow(mods[i] * std::min(w[i], t), q);
    double k = std::pow(s, 1.0 / q);
    return std::pow(std::pow(t, -theta) * k, q);
  };
  // trapezoid in log t (the dt/t measure)
  double acc = 0.5 * (integrand(l0) + integrand(l1));
  for (int i = 1; i < steps; ++i) acc += integrand(l0 + i * dl);
  return std::pow(acc * dl, 1.0 / q);
}

}  // namespace

double interp_norm(std::span<const std::complex<double>> u,
                   const OperatorSpec& d, double theta, double q,
                   InterpMethod method) {
  if (static_cast<int>(u.size()) != d.dim())
    throw ValidationError("interp_norm: size mismatch");
  Eigen::MatrixXcd vinv;
  std::vector<double> w = interp_weights(d, &vinv);
  std::vector<double> mods(u.size());
  if (d.kind() == OperatorSpec::Kind::Dense) {
    Eigen::Map<const Eigen::VectorXcd> uv(u.data(),
                                          static_cast<int>(u.size()));
    Eigen::VectorXcd tu = vinv * uv;
    for (int i = 0; i < tu.size(); ++i)
      mods[static_cast<std::size_t>(i)] = std::abs(tu[i]);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) mods[i] = std::abs(u[i]);
  }
  return interp_norm_impl(std::move(mods), std::move(w), theta, q, method);
}

double interp_norm(std::span<const double> u, const OperatorSpec& d,
                   double theta, double q, InterpMethod method) {
  std::vector<std::complex<double>> cu(u.begin(), u.end());
  return interp_norm(std::span<const std::complex<double>>(cu), d, theta, q,
                     method);
}

}  // namespace degen
