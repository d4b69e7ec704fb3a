#include "parityprobe/protocol/device.hpp"

#include <cmath>

namespace parityprobe {

void DeviceParams::validate() const {
  for (int i = 0; i < kNumQubits; ++i) {
    if (chi[i] < 0.0) throw ValidationError("dispersive shift must be >= 0");
    if (qubit_t1_us[i] <= 0.0 || qubit_t2_us[i] <= 0.0)
      throw ValidationError("coherence times must be positive");
    if (qubit_t2_us[i] > 2.0 * qubit_t1_us[i] + 1e-12)
      throw ValidationError("T2 must not exceed 2 T1");
    if (residual_excitation[i] < 0.0 || residual_excitation[i] > 1.0)
      throw ValidationError("residual excitation must be a probability");
    for (int j = 0; j < kNumQubits; ++j)
      if (std::abs(chi_qq[i][j] - chi_qq[j][i]) > 1e-12)
        throw ValidationError("chi_qq must be symmetric");
  }
  if (cavity_t1_us <= 0.0) throw ValidationError("cavity T1 must be positive");
  if (fock_cutoff < 2) throw ValidationError("fock_cutoff must be >= 2");
  for (int a = 0; a < 2; ++a) {
    double row = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (readout_assignment[a][c] < 0.0)
        throw ValidationError("confusion matrix entries must be >= 0");
      row += readout_assignment[a][c];
    }
    if (std::abs(row - 1.0) > 1e-9)
      throw ValidationError("confusion matrix rows must sum to 1");
  }
  if (unselective_gate_ns < 0.0 || selective_gate_ns < 0.0 || readout_ns < 0.0)
    throw ValidationError("durations must be >= 0");
}

DeviceParams DeviceParams::reference() {
  DeviceParams p;
  for (int i = 0; i < kNumQubits; ++i)
    for (int j = 0; j < kNumQubits; ++j)
      if (i != j) p.chi_qq[i][j] = 0.001;
  return p;
}

DeviceParams DeviceParams::ideal() {
  DeviceParams p;
  p.cavity_t1_us = 1e12;
  p.qubit_t1_us = {1e12, 1e12, 1e12, 1e12};
  p.qubit_t2_us = {2e12, 2e12, 2e12, 2e12};
  p.readout_assignment = {{{1.0, 0.0}, {0.0, 1.0}}};
  p.kerr = 0.0;
  p.chi_prime = {};
  p.chi_qq = {};
  return p;
}

int SubsetParitySpec::subset_size() const {
  return static_cast<int>(subset[0]) + static_cast<int>(subset[1]) +
         static_cast<int>(subset[2]);
}

std::string SubsetParitySpec::label() const {
  std::string s(3, 'I');
  for (int k = 0; k < 3; ++k)
    if (subset[k]) s[k] = 'Z';
  return s;
}

SubsetParitySpec SubsetParitySpec::from_label(const std::string& label,
                                              double theta, double n0) {
  if (label.size() != 3) throw ValidationError("subset label must be 3 letters");
  SubsetParitySpec spec;
  for (int k = 0; k < 3; ++k) {
    if (label[k] == 'Z')
      spec.subset[k] = true;
    else if (label[k] != 'I')
      throw ValidationError("subset label letters must be I or Z");
  }
  spec.theta = theta;
  spec.n0 = n0;
  spec.validate();
  return spec;
}

void SubsetParitySpec::validate() const {
  if (subset_size() == 0) throw ValidationError("subset must be nonempty");
  if (!(theta > 0.0) || theta > kPi + 1e-12)
    throw ValidationError("theta must lie in (0, pi]");
  if (subset_size() == 3 && std::abs(theta - kPi) > 1e-9)
    throw ValidationError("three-qubit parity requires theta = pi");
  if (!(n0 > 0.0)) throw ValidationError("n0 must be positive");
}

PointerSeparation pointer_separation(double n0, double theta) {
  if (!(n0 > 0.0)) throw ValidationError("n0 must be positive");
  if (!(theta > 0.0) || theta > kPi + 1e-12)
    throw ValidationError("theta must lie in (0, pi]");
  const double delta = 2.0 * n0 * (1.0 - std::cos(theta));
  return PointerSeparation{delta, std::exp(-delta)};
}

}  // namespace parityprobe
