#pragma once

#include "parityprobe/channel.hpp"
#include "parityprobe/instrument.hpp"
#include "parityprobe/pauli.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/protocol/device.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace parityprobe {

struct AssignmentFit {
  double contrast = 0.0;
  double offset = 0.0;
  double fidelity = 0.0;  // (1 + contrast)/2 corrected for bias
};

/// One preparation record: product X-rotation angles and the observed
/// click (odd-outcome) frequency.
struct PreparationRecord {
  std::array<double, 3> angles;
  double click_frequency;
};

/// Least-squares fit of p_click = offset + (contrast/2)(1 - prod cos
/// theta_k) over the measured subset.
AssignmentFit assignment_fidelity(const std::vector<PreparationRecord>& records,
                                  const SubsetParitySpec& spec);

struct SpecificityReport {
  double c_i = 0.0;
  double c_t = 0.0;
  double c_o = 0.0;
  double theta_s_deg = 0.0;
  double c_max = 0.0;
  Matrix sigma_o;            // unit residual direction, empty when undefined
  bool sigma_o_defined = false;
  bool wrong_sign = false;   // c_t <= 0

  /// Realized measurement axis (c_t sigma_t + c_o sigma_o)/c_max.
  Matrix sigma_max(const PauliString& target) const;
};

/// Pauli decomposition of a binary effect against a target word.
SpecificityReport specificity(const Matrix& e, const PauliString& target);

struct JMeasures {
  double fidelity;
  double distance;
};

/// Trace fidelity and distance between channel Jamiolkowski matrices.
JMeasures j_measures(const Channel& ch1, const Channel& ch2);

struct SMeasureResult {
  double value = 0.0;
  Vector state;          // optimizing pure state
  int restarts = 0;
  double best3_spread = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct OptimizerOptions {
  int restarts = 128;
  long max_iterations = 2000;
  double grad_tol = 1e-10;
  double agreement_tol = 1e-6;
  std::uint64_t seed = 7;
  bool force_iterative = false;  // skip analytic fast paths
};

/// Worst-case classical fidelity of the two detectors' outcome
/// distributions over pure system states (no reference needed).
SMeasureResult detector_s_fidelity(const Povm& p1, const Povm& p2,
                                   OptimizerOptions opts = {});

/// Worst-case total-variation distance. Binary pairs take the analytic
/// path max |eig(E - E')|; larger outcome counts use sign-fixing ascent.
SMeasureResult detector_s_distance(const Povm& p1, const Povm& p2,
                                   OptimizerOptions opts = {});

/// Worst-case output trace fidelity of two instruments over pure states on
/// system (x) reference, reference dimension equal to the system's.
SMeasureResult qi_s_fidelity(const QuantumInstrument& q1,
                             const QuantumInstrument& q2,
                             OptimizerOptions opts = {});

/// Worst-case output trace distance of two instruments (diamond distance).
SMeasureResult qi_s_distance(const QuantumInstrument& q1,
                             const QuantumInstrument& q2,
                             OptimizerOptions opts = {});

enum class SMode { Fidelity, Distance };
enum class SSpace { System, SystemReference };

/// Haar-sampled extremum oracle: min (fidelity) or max (distance) of the
/// detector objective over n random pure states. Deterministic per seed.
double s_measure_bruteforce(const Povm& p1, const Povm& p2,
                            std::int64_t n_samples, std::uint64_t seed,
                            SMode mode, SSpace space);

/// Same oracle for instrument pairs on system (x) reference.
double s_measure_bruteforce(const QuantumInstrument& q1,
                            const QuantumInstrument& q2,
                            std::int64_t n_samples, std::uint64_t seed,
                            SMode mode);

/// Objective re-evaluation helpers used for optimizer soundness checks.
double detector_fidelity_objective(const Povm& p1, const Povm& p2,
                                   const Vector& psi);
double detector_distance_objective(const Povm& p1, const Povm& p2,
                                   const Vector& psi);
double qi_fidelity_objective(const QuantumInstrument& q1,
                             const QuantumInstrument& q2, const Vector& psi);
double qi_distance_objective(const QuantumInstrument& q1,
                             const QuantumInstrument& q2, const Vector& psi);

}  // namespace parityprobe
