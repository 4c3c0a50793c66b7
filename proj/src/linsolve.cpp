#include "degen/linsolve.hpp"

namespace degen {

SparseComplexLU::SparseComplexLU(int n, const std::vector<CTriplet>& entries)
    : n_(n) {
  real_ = true;
  for (const auto& t : entries)
    if (t.value().imag() != 0.0) {
      real_ = false;
      break;
    }
  std::vector<Eigen::Triplet<double>> rt;
  if (real_) {
    rt.reserve(entries.size());
    for (const auto& t : entries)
      rt.emplace_back(t.row(), t.col(), t.value().real());
    mat_.resize(n, n);
  } else {
    rt.reserve(4 * entries.size());
    for (const auto& t : entries) {
      double re = t.value().real(), im = t.value().imag();
      if (re != 0.0) {
        rt.emplace_back(t.row(), t.col(), re);
        rt.emplace_back(t.row() + n, t.col() + n, re);
      }
      if (im != 0.0) {
        rt.emplace_back(t.row(), t.col() + n, -im);
        rt.emplace_back(t.row() + n, t.col(), im);
      }
    }
    mat_.resize(2 * n, 2 * n);
  }
  mat_.setFromTriplets(rt.begin(), rt.end());
  mat_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->compute(mat_);
  if (lu_->info() != Eigen::Success)
    throw SolveError("sparse factorization failed (singular system?)");
}

Eigen::VectorXcd SparseComplexLU::solve(const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw ValidationError("solve: rhs size mismatch");
  if (real_) {
    Eigen::VectorXd br = b.real(), bi = b.imag();
    // materialize each solve before touching the strided real()/imag()
    // views; SparseLU's solve expression cannot evaluate into them
    Eigen::VectorXd xr = lu_->solve(br);
    Eigen::VectorXcd x(n_);
    x.real() = xr;
    if (bi.isZero(0.0)) {
      x.imag().setZero();
    } else {
      Eigen::VectorXd xi = lu_->solve(bi);
      x.imag() = xi;
    }
    return x;
  }
  Eigen::VectorXd stacked(2 * n_);
  stacked.head(n_) = b.real();
  stacked.tail(n_) = b.imag();
  Eigen::VectorXd sol = lu_->solve(stacked);
  Eigen::VectorXcd x(n_);
  x.real() = sol.head(n_);
  x.imag() = sol.tail(n_);
  return x;
}

Eigen::VectorXcd SparseComplexLU::solve_adjoint(
    const Eigen::VectorXcd& b) const {
  if (b.size() != n_) throw ValidationError("solve: rhs size mismatch");
  // M^H corresponds to the transpose of the real form.
  auto tr = lu_->transpose();
  if (real_) {
    Eigen::VectorXd br = b.real(), bi = b.imag();
    Eigen::VectorXd xr = tr.solve(br);
    Eigen::VectorXcd x(n_);
    x.real() = xr;
    if (bi.isZero(0.0)) {
      x.imag().setZero();
    } else {
      Eigen::VectorXd xi = tr.solve(bi);
      x.imag() = xi;
    }
    return x;
  }
  Eigen::VectorXd stacked(2 * n_);
  stacked.head(n_) = b.real();
  stacked.tail(n_) = b.imag();
  Eigen::VectorXd sol = tr.solve(stacked);
  Eigen::VectorXcd x(n_);
  x.real() = sol.head(n_);
  x.imag() = sol.tail(n_);
  return x;
}

}  // namespace degen
