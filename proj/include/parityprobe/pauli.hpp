#pragma once

#include "parityprobe/types.hpp"

#include <string>
#include <vector>

namespace parityprobe {

/// A tensor word over {I, X, Y, Z}. Qubit 1 is the leftmost letter.
class PauliString {
 public:
  explicit PauliString(std::string label);

  const std::string& label() const { return label_; }
  Index num_qubits() const { return static_cast<Index>(label_.size()); }
  Index dim() const { return Index{1} << label_.size(); }
  bool is_identity() const;

  /// Dense 2^n x 2^n matrix of the word.
  Matrix matrix() const;

 private:
  std::string label_;
};

Matrix pauli_operator(const std::string& label);

/// All 4^n labels in lexicographic order over (I, X, Y, Z), qubit 1 varying
/// slowest. The indexing used by pauli_expand and ChiMatrix.
std::vector<std::string> pauli_labels(Index num_qubits);

std::vector<Matrix> pauli_basis_matrices(Index num_qubits);

Index pauli_index(const std::string& label);

/// Coefficients c_i = Tr[sigma_i H] / 2^n, ordered as pauli_labels(n).
RealVector pauli_expand(const Matrix& h, Index num_qubits);

/// Complex-valued expansion for non-Hermitian operators.
Vector pauli_expand_complex(const Matrix& m, Index num_qubits);

Matrix pauli_reconstruct(const RealVector& coeffs, Index num_qubits);

}  // namespace parityprobe
