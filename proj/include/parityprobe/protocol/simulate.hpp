#pragma once

#include "parityprobe/instrument.hpp"
#include "parityprobe/protocol/device.hpp"
#include "parityprobe/protocol/schedule.hpp"
#include "parityprobe/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace parityprobe {

struct SimulateOptions {
  bool noise = true;
  bool herald = false;     // post-select on the herald check
  double step_ns = 2.0;    // integrator step for noisy free evolution
  double truncation_tol = 1e-6;
  double tp_tol = 1e-6;    // accepted trace-preservation defect
};

/// Sampled outcome counts keyed by (outcome bit, optional herald bit).
struct OutcomeRecord {
  std::map<std::pair<int, int>, std::int64_t> counts;  // herald -1 if absent
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  std::int64_t clicks() const;  // outcome 1 regardless of herald
};

/// Both assemblies of one propagated schedule, so heralded and unheralded
/// instruments come from a single simulation.
struct SimulationResult {
  QuantumInstrument unheralded;
  std::optional<QuantumInstrument> heralded;
  double herald_probability = 1.0;  // on the maximally mixed input
  double tp_defect = 0.0;           // unheralded branch-sum defect
};

/// Propagate a complete register operator basis through the schedule and
/// assemble the conditional branch maps. Readout misassignment is applied
/// classically to the outcome labels.
SimulationResult simulate_protocol(const PulseSchedule& schedule,
                                   const DeviceParams& params,
                                   const SimulateOptions& options = {});

QuantumInstrument simulate_instrument(const PulseSchedule& schedule,
                                      const DeviceParams& params,
                                      const SimulateOptions& options = {});

/// Projective reference: branches rho -> P rho P for the
/// even/odd subset-parity projectors.
QuantumInstrument ideal_instrument(const SubsetParitySpec& spec);

/// Sample outcome records for a product preparation Rx(angle_k)|000>.
/// Deterministic per (seed, shot index).
OutcomeRecord simulate_shots(const PulseSchedule& schedule,
                             const DeviceParams& params,
                             const std::array<double, 3>& prep_angles,
                             std::int64_t shots, std::uint64_t seed,
                             const SimulateOptions& options = {});

/// Outcome distribution of an instrument on a product preparation
/// Rx(angle_k)|000>; index 0 = even outcome, 1 = odd (click).
RealVector outcome_distribution(const QuantumInstrument& qi,
                                const std::array<double, 3>& prep_angles);

/// Density matrix of the product preparation Rx(angle_k)|000>.
Matrix product_preparation(const std::array<double, 3>& prep_angles);

}  // namespace parityprobe
