#include "parityprobe/povm.hpp"

#include "parityprobe/linalg.hpp"

namespace parityprobe {

Povm::Povm(std::vector<Matrix> effects, double psd_tol,
           double completeness_tol)
    : effects_(std::move(effects)) {
  if (effects_.empty()) throw ValidationError("POVM needs at least one effect");
  dim_ = effects_.front().rows();
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (const auto& e : effects_) {
    if (e.rows() != dim_ || e.cols() != dim_)
      throw DimensionError("POVM effects have inconsistent dimensions");
    if (!is_hermitian(e, 1e-9))
      throw ValidationError("POVM effect is not Hermitian");
    if (min_eigenvalue(e) < -psd_tol)
      throw ValidationError("POVM effect is not PSD");
    sum += e;
  }
  if ((sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() >
      completeness_tol)
    throw ValidationError("POVM effects do not sum to identity");
}

Povm Povm::binary(const Matrix& effect, double psd_tol) {
  std::vector<Matrix> effects{
      effect, Matrix::Identity(effect.rows(), effect.cols()) - effect};
  return Povm(std::move(effects), psd_tol);
}

const Matrix& Povm::first() const { return effects_.front(); }

RealVector Povm::outcome_probabilities(const Matrix& rho) const {
  RealVector p(static_cast<Index>(effects_.size()));
  for (std::size_t i = 0; i < effects_.size(); ++i)
    p(static_cast<Index>(i)) = (effects_[i] * rho).trace().real();
  return p;
}

}  // namespace parityprobe
