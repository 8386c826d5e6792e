#pragma once

#include <Eigen/Dense>
#include <complex>

#include "cdlab/errors.hpp"

namespace cdlab {

using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using complexd = std::complex<double>;

inline cxmat herm_part(const cxmat& a) { return 0.5 * (a + a.adjoint()); }

inline double asymmetry(const cxmat& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

inline double operator_norm(const cxmat& a) {
  Eigen::JacobiSVD<cxmat> svd(a);
  return svd.singularValues()(0);
}

// 2-norm of a Hermitian matrix from its extreme eigenvalues (much cheaper
// than an SVD for the sizes we use).
inline double hermitian_norm(const cxmat& a) {
  Eigen::SelfAdjointEigenSolver<cxmat> es(a, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(a.rows() - 1)));
}

// e^{-iA} for Hermitian A via its eigendecomposition.
inline cxmat unitary_exp(const cxmat& a) {
  Eigen::SelfAdjointEigenSolver<cxmat> es(a);
  cxvec phases(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    phases(i) = std::exp(complexd(0.0, -es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Scaling-and-squaring Taylor exponential for general (small) matrices.
inline cxmat expm(const cxmat& a) {
  double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  cxmat b = a;
  while (nrm > 0.5) {
    b *= 0.5;
    nrm *= 0.5;
    ++squarings;
  }
  cxmat result = cxmat::Identity(a.rows(), a.cols());
  cxmat term = result;
  for (int k = 1; k <= 30; ++k) {
    term = (term * b) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace cdlab
