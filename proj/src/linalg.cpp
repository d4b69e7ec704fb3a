#include "parityprobe/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace parityprobe {

double hermiticity_defect(const Matrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& h, double tol) {
  return h.rows() == h.cols() && hermiticity_defect(h) <= tol;
}

Matrix hermitize(const Matrix& h) { return 0.5 * (h + h.adjoint()); }

RealVector hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const Matrix& h) {
  return hermitian_eigenvalues(h).minCoeff();
}

Matrix psd_clip(const Matrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  if (ev.minCoeff() < -tol) {
    throw ValidationError("operator is not positive semidefinite: min eig " +
                          std::to_string(ev.minCoeff()));
  }
  RealVector clipped = ev.cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix sqrtm_psd(const Matrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  if (ev.minCoeff() < -tol) {
    throw ValidationError("sqrtm_psd: negative eigenvalue " +
                          std::to_string(ev.minCoeff()));
  }
  RealVector root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace_second(const Matrix& m, Index da, Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DimensionError("partial_trace_second: dimension mismatch");
  Matrix out = Matrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

Matrix partial_trace_first(const Matrix& m, Index da, Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DimensionError("partial_trace_first: dimension mismatch");
  Matrix out = Matrix::Zero(db, db);
  for (Index k = 0; k < db; ++k)
    for (Index l = 0; l < db; ++l)
      for (Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

double trace_fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows())
    throw DimensionError("trace_fidelity: dimension mismatch");
  if (min_eigenvalue(hermitize(rho)) < -1e-8 ||
      min_eigenvalue(hermitize(sigma)) < -1e-8)
    throw ValidationError("trace_fidelity: input has negative eigenvalue");
  Matrix root = sqrtm_psd(hermitize(rho), 1e-8);
  Matrix inner = hermitize(root * hermitize(sigma) * root);
  RealVector ev = hermitian_eigenvalues(inner).cwiseMax(0.0);
  double s = ev.cwiseSqrt().sum();
  return s * s;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  RealVector ev = hermitian_eigenvalues(hermitize(rho - sigma));
  return 0.5 * ev.cwiseAbs().sum();
}

double nuclear_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double root_fidelity_factored(const Matrix& x, const Matrix& y) {
  return nuclear_norm(x.adjoint() * y);
}

std::vector<Matrix> computational_basis_projectors(Index dim) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) {
    Matrix p = Matrix::Zero(dim, dim);
    p(i, i) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace parityprobe
