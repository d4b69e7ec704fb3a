#pragma once

#include "parityprobe/povm.hpp"
#include "parityprobe/types.hpp"

#include <vector>

namespace parityprobe {

/// Completely positive map in Kraus form. Kraus operators are d_out x d_in
/// and need not be square.
class Channel {
 public:
  enum class TraceBehavior { Preserving, NonIncreasing, Unchecked };

  Channel(std::vector<Matrix> kraus,
          TraceBehavior behavior = TraceBehavior::Unchecked,
          double tol = kCompletenessTol);

  static Channel identity(Index dim);
  static Channel from_unitary(const Matrix& u);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  Index dim_in() const { return din_; }
  Index dim_out() const { return dout_; }
  TraceBehavior trace_behavior() const { return behavior_; }

  Matrix apply(const Matrix& rho) const;

  /// Sum_k K^dag K; equals identity for a trace-preserving map.
  Matrix kraus_gram() const;

  /// Unnormalized Choi matrix Sum_{ij} C(|i><j|) (x) |i><j|, output factor
  /// first. Trace d_in for a trace-preserving map.
  Matrix choi() const;

 private:
  std::vector<Matrix> kraus_;
  Index din_ = 0, dout_ = 0;
  TraceBehavior behavior_ = TraceBehavior::Unchecked;
};

/// Jamiolkowski matrix (channel (x) id)(|Phi+><Phi+|) with the maximally
/// entangled state normalized, so a TP channel maps to a unit-trace state.
Matrix jamiolkowski(const Channel& ch);

Matrix jamiolkowski_from_choi(const Matrix& choi, Index dim_in);

/// Recover a Kraus decomposition from an (unnormalized) Choi matrix.
/// Eigenvalues in [-tol, 0) are clipped.
std::vector<Matrix> kraus_from_choi(const Matrix& choi, Index dim_in,
                                    Index dim_out, double tol = 1e-9);

/// Process matrix chi with F(rho) = Sum_ij chi_ij sigma_i rho sigma_j, in the
/// generalized Pauli basis ordered as pauli_labels(n). Square maps only.
Matrix chi_matrix(const Channel& branch, Index num_qubits);

/// Quantum-to-classical channel rho -> Sum_i Tr[E_i rho] |i><i|.
Channel detector_channel(const Povm& p);

}  // namespace parityprobe
