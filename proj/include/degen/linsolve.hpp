#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <memory>
#include <vector>

#include "degen/errors.hpp"

namespace degen {

using CTriplet = Eigen::Triplet<std::complex<double>>;

// Sparse direct solver for complex systems through the equivalent real
// form [[Re, -Im], [Im, Re]]; purely real systems skip the doubling.
// Factorizes once; solves M x = b and the adjoint M^H x = b.
class SparseComplexLU {
 public:
  SparseComplexLU(int n, const std::vector<CTriplet>& entries);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd solve_adjoint(const Eigen::VectorXcd& b) const;
  int size() const { return n_; }
  bool real_path() const { return real_; }

 private:
  int n_;
  bool real_;
  Eigen::SparseMatrix<double> mat_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

}  // namespace degen
