#pragma once

#include "parityprobe/types.hpp"

#include <string>
#include <vector>

namespace parityprobe {

/// Single-qubit rotation token: one of I, Rx+, Rx-, Ry+, Ry-, Ry180
/// (+/- are quarter turns). Three-qubit rotations are labeled by tokens
/// joined with '.', e.g. "I.Ry+.Rx-".
Eigen::Matrix2cd rotation_token_unitary(const std::string& token);

/// Product rotation for a 3-qubit label.
Matrix rotation_unitary(const std::string& label);

class RotationSet {
 public:
  enum class Kind { Complete, Overcomplete };

  static RotationSet complete();     // {I, Ry+, Rx+, Ry-}^3, 64 elements
  static RotationSet overcomplete();  // all 6 tokens^3, 216 elements

  Kind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  std::size_t size() const { return labels_.size(); }
  Index index_of(const std::string& label) const;

  /// Design matrix A(i, j) = Tr[sigma_j R_i rho R_i^dag] over the
  /// generalized Pauli basis, for probe states R_i rho R_i^dag.
  RealMatrix design_matrix(const Matrix& rho) const;

 private:
  RotationSet(Kind kind, const std::vector<std::string>& tokens);
  Kind kind_;
  std::vector<std::string> labels_;
  std::vector<Matrix> unitaries_;
};

}  // namespace parityprobe
