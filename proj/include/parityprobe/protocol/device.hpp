#pragma once

#include "parityprobe/types.hpp"

#include <array>

namespace parityprobe {

/// Simulation aborted because the cavity Fock truncation was too tight.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Qubit indices: 0..2 are the register qubits (qubit 1 has the smallest
/// dispersive shift), 3 is the ancilla.
inline constexpr int kNumQubits = 4;
inline constexpr int kAncilla = 3;

/// Dispersive-model rates and calibration constants. Units: dispersive
/// shifts and Kerr in MHz (cyclic), durations in ns, coherence times in us.
struct DeviceParams {
  std::array<double, 4> chi{0.613, 0.811, 1.194, 1.651};  // MHz
  std::array<std::array<double, 4>, 4> chi_qq{};           // MHz, symmetric
  double kerr = 0.0;                                       // MHz
  std::array<double, 4> chi_prime{};                       // MHz
  double cavity_t1_us = 72.0;
  std::array<double, 4> qubit_t1_us{86.0, 87.0, 58.0, 23.0};
  std::array<double, 4> qubit_t2_us{73.0, 77.0, 52.0, 26.0};
  // readout_assignment[a][c] = P(observe c | ancilla state a), rows sum to 1.
  std::array<std::array<double, 2>, 2> readout_assignment{
      {{0.989, 0.011}, {0.029, 0.971}}};
  int fock_cutoff = 60;
  std::array<double, 4> residual_excitation{};
  double unselective_gate_ns = 14.0;
  double selective_gate_ns = 300.0;
  double readout_ns = 300.0;
  double selective_leakage = 0.0;  // fractional rotation of non-vacuum levels

  void validate() const;

  /// Default 1 kHz qubit-qubit shifts on all off-diagonal pairs.
  static DeviceParams reference();

  /// Reference device with all decoherence and Hamiltonian corrections
  /// switched off (infinite lifetimes, ideal readout, K = chi' = chi_qq = 0).
  static DeviceParams ideal();
};

/// Subset-parity measurement request: which register qubits are measured,
/// the mapping angle, and the initial pointer photon number.
struct SubsetParitySpec {
  std::array<bool, 3> subset{};
  double theta = 0.0;  // radians
  double n0 = 5.0;

  int subset_size() const;
  /// Pauli word, e.g. {1,3} -> "ZIZ".
  std::string label() const;
  static SubsetParitySpec from_label(const std::string& label, double theta,
                                     double n0);

  void validate() const;
};

struct PointerSeparation {
  double delta;    // squared phase-space separation of the pointer states
  double overlap;  // |<even|odd>|^2 = exp(-delta)
};

/// Separation of the even/odd coherent pointers after the mapping,
/// delta = 2 n0 (1 - cos theta).
PointerSeparation pointer_separation(double n0, double theta);

}  // namespace parityprobe
