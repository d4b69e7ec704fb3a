#include "parityprobe/channel.hpp"

#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"

#include <Eigen/Eigenvalues>

namespace parityprobe {

Channel::Channel(std::vector<Matrix> kraus, TraceBehavior behavior, double tol)
    : kraus_(std::move(kraus)), behavior_(behavior) {
  if (kraus_.empty()) throw ValidationError("channel needs Kraus operators");
  dout_ = kraus_.front().rows();
  din_ = kraus_.front().cols();
  for (const auto& k : kraus_)
    if (k.rows() != dout_ || k.cols() != din_)
      throw DimensionError("inconsistent Kraus dimensions");
  if (behavior_ != TraceBehavior::Unchecked) {
    Matrix gram = kraus_gram();
    if (behavior_ == TraceBehavior::Preserving) {
      if ((gram - Matrix::Identity(din_, din_)).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("channel is not trace-preserving");
    } else {
      if (min_eigenvalue(Matrix::Identity(din_, din_) - gram) < -tol)
        throw ValidationError("channel is not trace-non-increasing");
    }
  }
}

Channel Channel::identity(Index dim) {
  return Channel({Matrix::Identity(dim, dim)}, TraceBehavior::Preserving);
}

Channel Channel::from_unitary(const Matrix& u) {
  return Channel({u}, TraceBehavior::Preserving);
}

Matrix Channel::apply(const Matrix& rho) const {
  if (rho.rows() != din_ || rho.cols() != din_)
    throw DimensionError("channel input dimension mismatch");
  Matrix out = Matrix::Zero(dout_, dout_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

Matrix Channel::kraus_gram() const {
  Matrix gram = Matrix::Zero(din_, din_);
  for (const auto& k : kraus_) gram += k.adjoint() * k;
  return gram;
}

Matrix Channel::choi() const {
  // vec'(K) with index (o, i) stacked as o * din + i equals (K (x) I)|sum ii>.
  Matrix out = Matrix::Zero(dout_ * din_, dout_ * din_);
  for (const auto& k : kraus_) {
    Vector v(dout_ * din_);
    for (Index o = 0; o < dout_; ++o)
      for (Index i = 0; i < din_; ++i) v(o * din_ + i) = k(o, i);
    out += v * v.adjoint();
  }
  return out;
}

Matrix jamiolkowski(const Channel& ch) {
  return ch.choi() / static_cast<double>(ch.dim_in());
}

Matrix jamiolkowski_from_choi(const Matrix& choi, Index dim_in) {
  return choi / static_cast<double>(dim_in);
}

std::vector<Matrix> kraus_from_choi(const Matrix& choi, Index dim_in,
                                    Index dim_out, double tol) {
  if (choi.rows() != dim_in * dim_out)
    throw DimensionError("kraus_from_choi: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(choi));
  const RealVector& ev = es.eigenvalues();
  if (ev.minCoeff() < -tol)
    throw ValidationError("kraus_from_choi: Choi matrix not PSD, min eig " +
                          std::to_string(ev.minCoeff()));
  std::vector<Matrix> kraus;
  for (Index k = 0; k < ev.size(); ++k) {
    if (ev(k) <= 0.0) continue;
    const double w = std::sqrt(ev(k));
    Matrix op(dim_out, dim_in);
    for (Index o = 0; o < dim_out; ++o)
      for (Index i = 0; i < dim_in; ++i)
        op(o, i) = w * es.eigenvectors()(o * dim_in + i, k);
    kraus.push_back(std::move(op));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(dim_out, dim_in));
  return kraus;
}

Matrix chi_matrix(const Channel& branch, Index num_qubits) {
  if (branch.dim_in() != branch.dim_out())
    throw DimensionError("chi_matrix: branch map must be square");
  const Index dim = Index{1} << num_qubits;
  if (branch.dim_in() != dim)
    throw DimensionError("chi_matrix: dimension is not 2^n");
  // Expand each Kraus operator in the Pauli basis; chi = sum_m a_m a_m^dag.
  const Index nb = dim * dim;
  Matrix chi = Matrix::Zero(nb, nb);
  for (const auto& k : branch.kraus()) {
    Vector a = pauli_expand_complex(k, num_qubits);
    chi += a * a.adjoint();
  }
  return chi;
}

Channel detector_channel(const Povm& p) {
  const Index d = p.dim();
  const Index m = static_cast<Index>(p.num_outcomes());
  std::vector<Matrix> kraus;
  for (Index i = 0; i < m; ++i) {
    Matrix root = sqrtm_psd(p.effect(static_cast<std::size_t>(i)));
    for (Index k = 0; k < d; ++k) {
      Matrix op = Matrix::Zero(m, d);
      op.row(i) = root.row(k);
      kraus.push_back(std::move(op));
    }
  }
  return Channel(std::move(kraus), Channel::TraceBehavior::Preserving);
}

}  // namespace parityprobe
