#include "parityprobe/instrument.hpp"

#include "parityprobe/linalg.hpp"

namespace parityprobe {

QuantumInstrument::QuantumInstrument(std::vector<Channel> branches,
                                     std::vector<std::string> labels,
                                     double tp_tol)
    : branches_(std::move(branches)), labels_(std::move(labels)) {
  if (branches_.empty()) throw ValidationError("instrument needs branches");
  const Index din = branches_.front().dim_in();
  const Index dout = branches_.front().dim_out();
  for (const auto& b : branches_)
    if (b.dim_in() != din || b.dim_out() != dout)
      throw DimensionError("instrument branches have mixed dimensions");
  if (labels_.empty())
    for (std::size_t i = 0; i < branches_.size(); ++i)
      labels_.push_back(std::to_string(i));
  if (labels_.size() != branches_.size())
    throw ValidationError("label count does not match branch count");
  Matrix gram = Matrix::Zero(din, din);
  for (const auto& b : branches_) gram += b.kraus_gram();
  tp_defect_ = (gram - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (tp_defect_ > tp_tol)
    throw ValidationError("instrument branch sum is not trace-preserving, defect " +
                          std::to_string(tp_defect_));
}

Povm povm_from_instrument(const QuantumInstrument& qi) {
  std::vector<Matrix> effects;
  effects.reserve(qi.num_outcomes());
  for (const auto& b : qi.branches()) effects.push_back(hermitize(b.kraus_gram()));
  return Povm(std::move(effects), kPsdTol, qi.tp_defect() + kCompletenessTol);
}

Channel qi_channel(const QuantumInstrument& qi) {
  const Index dout = qi.dim_out();
  const auto m = static_cast<Index>(qi.num_outcomes());
  std::vector<Matrix> kraus;
  for (Index i = 0; i < m; ++i) {
    for (const auto& k : qi.branch(static_cast<std::size_t>(i)).kraus()) {
      Matrix op = Matrix::Zero(dout * m, qi.dim_in());
      for (Index r = 0; r < dout; ++r) op.row(r * m + i) = k.row(r);
      kraus.push_back(std::move(op));
    }
  }
  return Channel(std::move(kraus), Channel::TraceBehavior::Unchecked);
}

QuantumInstrument projective_instrument(const std::vector<Matrix>& projectors,
                                        std::vector<std::string> labels) {
  std::vector<Channel> branches;
  branches.reserve(projectors.size());
  for (const auto& p : projectors)
    branches.emplace_back(std::vector<Matrix>{p},
                          Channel::TraceBehavior::NonIncreasing);
  return QuantumInstrument(std::move(branches), std::move(labels));
}

}  // namespace parityprobe
